#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "trustwire/bytes.hpp"

namespace trustwire {

// Field tags are part of the wire format and never renumbered.
enum class FieldTag : std::uint8_t {
  NonceCiphertext = 0x01,
  AgencyId = 0x02,
  RandomSet = 0x03,
  RequestPayload = 0x04,
  Digest = 0x05,
  SignedBlob = 0x06,
  MappingValue = 0x07,
  ResponsePayload = 0x08,
};

bool is_known_tag(std::uint8_t tag) noexcept;

struct Field {
  FieldTag tag;
  Bytes payload;
  friend bool operator==(const Field&, const Field&) = default;
};

inline constexpr std::array<std::uint8_t, 3> kWireMagic = {'T', 'W', '1'};

/// "TW1" followed by tag(1) | length(4, big-endian) | payload for each field, in order.
Bytes encode_fields(const std::vector<Field>& fields);

/// Exact inverse of encode_fields. Throws BadMagicError, TruncatedError or UnknownTagError.
std::vector<Field> decode_fields(ByteView bytes);

/// Big-endian IEEE-754 binary64.
std::array<std::uint8_t, 8> encode_f64(double value);
/// Throws LengthError unless given exactly 8 bytes.
double decode_f64(ByteView bytes);

/// Ordered S_R values: 1 to 32 unsigned 64-bit integers.
class RandomSet {
 public:
  static constexpr std::size_t kMaxSize = 32;

  /// Throws InvalidArgumentError when the size is outside [1, 32].
  explicit RandomSet(std::vector<std::uint64_t> values);

  const std::vector<std::uint64_t>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  friend bool operator==(const RandomSet&, const RandomSet&) = default;

 private:
  std::vector<std::uint64_t> values_;
};

/// Concatenated big-endian u64 values.
Bytes encode_random_set(const RandomSet& set);
/// Throws DecodeError on a length that is not 8..256 and a multiple of 8.
RandomSet decode_random_set(ByteView bytes);

}  // namespace trustwire
