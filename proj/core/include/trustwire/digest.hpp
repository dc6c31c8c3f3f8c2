#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "trustwire/bytes.hpp"

namespace trustwire {

/// A 16-byte MD5 value. MD5 is collision-broken; it is used here because the
/// protocol is defined in terms of it, not as a recommendation.
class Digest {
 public:
  static constexpr std::size_t kSize = 16;

  Digest() = default;
  explicit Digest(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

  /// Throws LengthError unless `bytes` is exactly 16 bytes long.
  static Digest from_bytes(ByteView bytes);
  static Digest from_hex(std::string_view hex);

  const std::array<std::uint8_t, kSize>& bytes() const noexcept { return bytes_; }
  ByteView view() const noexcept { return bytes_; }
  std::string hex() const;

  // Examines every byte regardless of where the first difference is.
  friend bool operator==(const Digest& a, const Digest& b) noexcept;

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

/// RFC 1321 MD5 over the exact input bytes.
Digest md5_digest(ByteView message);

}  // namespace trustwire
