#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "trustwire/bytes.hpp"

namespace trustwire {

using BigInt = boost::multiprecision::cpp_int;

/// Printable agency identifier such as "CIA" or "RAW": 1 to 16 bytes in 0x21..0x7e.
class AgencyId {
 public:
  static constexpr std::size_t kMaxLength = 16;

  explicit AgencyId(std::string id);

  const std::string& str() const noexcept { return id_; }
  friend auto operator<=>(const AgencyId&, const AgencyId&) = default;

 private:
  std::string id_;
};

struct PublicKey {
  BigInt modulus;
  BigInt exponent;
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct PrivateKey {
  BigInt modulus;
  BigInt exponent;
  friend bool operator==(const PrivateKey&, const PrivateKey&) = default;
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
  friend bool operator==(const KeyPair&, const KeyPair&) = default;
};

inline constexpr unsigned kDefaultKeyBits = 512;
inline constexpr unsigned kMillerRabinRounds = 40;

/// Deterministic textbook RSA key generation. `bit_length` must be even and at
/// least 32; the modulus has exactly `bit_length` bits and e = 65537.
KeyPair generate_keypair(unsigned bit_length, std::uint64_t seed);

/// d = e^-1 mod (p-1)(q-1). Throws InvalidArgumentError when e is not invertible.
KeyPair keypair_from_primes(const BigInt& p, const BigInt& q, const BigInt& e);

BigInt mod_inverse(const BigInt& value, const BigInt& modulus);

/// Miller-Rabin with bases drawn from a generator seeded by `seed`.
bool is_probable_prime(const BigInt& candidate, unsigned rounds, std::uint64_t seed);

/// Raw trapdoor permutation on a single block: block^exponent mod modulus.
/// Throws DecodeError when block >= modulus.
BigInt apply_key(const PublicKey& key, const BigInt& block);
BigInt apply_key(const PrivateKey& key, const BigInt& block);

// Block framing for byte strings. With k = byte length of the modulus, the
// plaintext is cut into chunks of at most k-2 bytes; each chunk becomes a
// (k-1)-byte block [length][chunk][zero fill], which is always below the
// modulus, and is transformed into a k-byte big-endian output block.
//
// seal() frames and transforms; open() transforms and unframes. open() with
// the complementary key inverts seal() exactly, for either key order.
Bytes seal(const PublicKey& key, ByteView plaintext);
Bytes seal(const PrivateKey& key, ByteView plaintext);
/// Throws DecodeError on a ragged length, a block >= modulus, or a block whose
/// framing does not parse.
Bytes open(const PublicKey& key, ByteView ciphertext);
Bytes open(const PrivateKey& key, ByteView ciphertext);

std::size_t modulus_bytes(const BigInt& modulus);

/// Certificate-authority registry of agency public keys.
class KeyRegistry {
 public:
  /// Throws DuplicateAgencyError if `id` is already registered.
  void register_agency(const AgencyId& id, const PublicKey& key);
  /// Throws UnknownAgencyError.
  const PublicKey& lookup(const AgencyId& id) const;
  bool contains(const AgencyId& id) const { return entries_.contains(id); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<AgencyId, PublicKey>& entries() const noexcept { return entries_; }

 private:
  std::map<AgencyId, PublicKey> entries_;
};

// Key files:
//   TRUSTWIRE-KEY v1 <public|private>
//   <modulus, lowercase hex>
//   <exponent, lowercase hex>
std::string to_key_file(const PublicKey& key);
std::string to_key_file(const PrivateKey& key);
/// Throws DecodeError on a malformed file.
std::variant<PublicKey, PrivateKey> parse_key_file(std::string_view text);

std::string to_hex(const BigInt& value);
BigInt bigint_from_hex(std::string_view hex);
BigInt bigint_from_bytes(ByteView big_endian);
/// Big-endian, left-padded with zeros to `width` bytes. Throws LengthError if it does not fit.
Bytes bigint_to_bytes(const BigInt& value, std::size_t width);

}  // namespace trustwire
