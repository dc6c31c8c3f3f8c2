#include "trustwire/keyfabric.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <random>
#include <sstream>

#include "trustwire/errors.hpp"

namespace trustwire {

namespace mp = boost::multiprecision;

AgencyId::AgencyId(std::string id) : id_(std::move(id)) {
  if (id_.empty() || id_.size() > kMaxLength) {
    throw InvalidArgumentError("agency id must be 1-16 bytes: '" + id_ + "'");
  }
  for (char c : id_) {
    if (c < 0x21 || c > 0x7e) throw InvalidArgumentError("agency id must be printable: '" + id_ + "'");
  }
}

BigInt bigint_from_bytes(ByteView big_endian) {
  BigInt value;
  if (!big_endian.empty()) mp::import_bits(value, big_endian.begin(), big_endian.end(), 8);
  return value;
}

Bytes bigint_to_bytes(const BigInt& value, std::size_t width) {
  Bytes raw;
  if (value != 0) mp::export_bits(value, std::back_inserter(raw), 8);
  if (raw.size() > width) throw LengthError("integer does not fit in " + std::to_string(width) + " bytes");
  Bytes out(width - raw.size(), 0);
  out.insert(out.end(), raw.begin(), raw.end());
  return out;
}

std::string to_hex(const BigInt& value) {
  if (value == 0) return "0";
  Bytes raw;
  mp::export_bits(value, std::back_inserter(raw), 8);
  std::string hex = to_hex(ByteView(raw));
  return hex.substr(hex.find_first_not_of('0'));
}

BigInt bigint_from_hex(std::string_view hex) {
  if (hex.empty()) throw DecodeError("empty hex integer");
  std::string padded(hex.size() % 2, '0');
  padded.append(hex);
  try {
    return bigint_from_bytes(from_hex(padded));
  } catch (const LengthError& e) {
    throw DecodeError(std::string("bad hex integer: ") + e.what());
  }
}

std::size_t modulus_bytes(const BigInt& modulus) { return (mp::msb(modulus) + 1 + 7) / 8; }

BigInt mod_inverse(const BigInt& value, const BigInt& modulus) {
  // Extended Euclid on (value, modulus); track only the coefficient of value.
  BigInt old_r = value % modulus, r = modulus;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw InvalidArgumentError("value is not invertible modulo the given modulus");
  BigInt inv = old_s % modulus;
  if (inv < 0) inv += modulus;
  return inv;
}

namespace {

constexpr std::array<unsigned, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                   43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

BigInt random_bits(std::mt19937_64& rng, unsigned bits) {
  BigInt value = 0;
  for (unsigned produced = 0; produced < bits; produced += 64) {
    value <<= 64;
    value += rng();
  }
  const unsigned words = (bits + 63) / 64;
  value >>= (words * 64 - bits);
  return value;
}

// Uniform-ish value in [low, high]; bias is irrelevant for witness selection.
BigInt random_below(std::mt19937_64& rng, const BigInt& low, const BigInt& high) {
  const BigInt span = high - low + 1;
  const unsigned bits = mp::msb(span) + 1;
  return low + random_bits(rng, bits + 64) % span;
}

bool miller_rabin(const BigInt& n, unsigned rounds, std::mt19937_64& rng) {
  if (n < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  BigInt d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  const BigInt n_minus_1 = n - 1;
  for (unsigned round = 0; round < rounds; ++round) {
    const BigInt a = random_below(rng, 2, n - 2);
    BigInt x = mp::powm(a, d, n);
    if (x == 1 || x == n_minus_1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mp::powm(x, 2, n);
      if (x == n_minus_1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

BigInt random_prime(std::mt19937_64& rng, unsigned bits) {
  for (;;) {
    BigInt candidate = random_bits(rng, bits);
    // Top two bits set so the product of two such primes has exactly 2*bits bits.
    mp::bit_set(candidate, bits - 1);
    mp::bit_set(candidate, bits - 2);
    mp::bit_set(candidate, 0);
    if (miller_rabin(candidate, kMillerRabinRounds, rng)) return candidate;
  }
}

template <typename Key>
BigInt apply_raw(const Key& key, const BigInt& block) {
  if (block >= key.modulus) throw DecodeError("block is not below the modulus");
  return mp::powm(block, key.exponent, key.modulus);
}

template <typename Key>
Bytes seal_impl(const Key& key, ByteView plaintext) {
  const std::size_t k = modulus_bytes(key.modulus);
  if (k < 3) throw InvalidArgumentError("modulus too small for byte framing");
  const std::size_t chunk = k - 2;
  Bytes out;
  out.reserve((plaintext.size() + chunk - 1) / chunk * k);
  Bytes block(k - 1);
  for (std::size_t offset = 0; offset < plaintext.size(); offset += chunk) {
    const std::size_t len = std::min(chunk, plaintext.size() - offset);
    std::fill(block.begin(), block.end(), 0);
    block[0] = static_cast<std::uint8_t>(len);
    std::copy_n(plaintext.begin() + static_cast<std::ptrdiff_t>(offset), len, block.begin() + 1);
    const Bytes transformed = bigint_to_bytes(apply_raw(key, bigint_from_bytes(block)), k);
    out.insert(out.end(), transformed.begin(), transformed.end());
  }
  return out;
}

template <typename Key>
Bytes open_impl(const Key& key, ByteView ciphertext) {
  const std::size_t k = modulus_bytes(key.modulus);
  if (k < 3) throw InvalidArgumentError("modulus too small for byte framing");
  if (ciphertext.size() % k != 0) throw DecodeError("ciphertext length is not a multiple of the block size");
  const std::size_t chunk = k - 2;
  const std::size_t blocks = ciphertext.size() / k;
  Bytes out;
  out.reserve(blocks * chunk);
  for (std::size_t i = 0; i < blocks; ++i) {
    const BigInt value = apply_raw(key, bigint_from_bytes(ciphertext.subspan(i * k, k)));
    Bytes block;
    try {
      block = bigint_to_bytes(value, k - 1);
    } catch (const LengthError&) {
      throw DecodeError("block framing overflow");
    }
    const std::size_t len = block[0];
    const bool last = i + 1 == blocks;
    if (len == 0 || len > chunk || (!last && len != chunk)) throw DecodeError("bad block length prefix");
    if (std::any_of(block.begin() + 1 + static_cast<std::ptrdiff_t>(len), block.end(),
                    [](std::uint8_t b) { return b != 0; })) {
      throw DecodeError("nonzero block fill");
    }
    out.insert(out.end(), block.begin() + 1, block.begin() + 1 + static_cast<std::ptrdiff_t>(len));
  }
  return out;
}

}  // namespace

bool is_probable_prime(const BigInt& candidate, unsigned rounds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return miller_rabin(candidate, rounds, rng);
}

KeyPair keypair_from_primes(const BigInt& p, const BigInt& q, const BigInt& e) {
  const BigInt n = p * q;
  const BigInt phi = (p - 1) * (q - 1);
  const BigInt d = mod_inverse(e, phi);
  return KeyPair{PublicKey{n, e}, PrivateKey{n, d}};
}

KeyPair generate_keypair(unsigned bit_length, std::uint64_t seed) {
  if (bit_length < 32) throw InvalidArgumentError("key size must be at least 32 bits");
  if (bit_length % 2 != 0) throw InvalidArgumentError("key size must be even");
  std::mt19937_64 rng(seed);
  const BigInt e = 65537;
  const unsigned half = bit_length / 2;
  for (;;) {
    const BigInt p = random_prime(rng, half);
    const BigInt q = random_prime(rng, half);
    if (p == q) continue;
    if (mp::gcd(e, (p - 1) * (q - 1)) != 1) continue;
    return keypair_from_primes(p, q, e);
  }
}

BigInt apply_key(const PublicKey& key, const BigInt& block) { return apply_raw(key, block); }
BigInt apply_key(const PrivateKey& key, const BigInt& block) { return apply_raw(key, block); }

Bytes seal(const PublicKey& key, ByteView plaintext) { return seal_impl(key, plaintext); }
Bytes seal(const PrivateKey& key, ByteView plaintext) { return seal_impl(key, plaintext); }
Bytes open(const PublicKey& key, ByteView ciphertext) { return open_impl(key, ciphertext); }
Bytes open(const PrivateKey& key, ByteView ciphertext) { return open_impl(key, ciphertext); }

void KeyRegistry::register_agency(const AgencyId& id, const PublicKey& key) {
  if (!entries_.emplace(id, key).second) throw DuplicateAgencyError("agency already registered: " + id.str());
}

const PublicKey& KeyRegistry::lookup(const AgencyId& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw UnknownAgencyError("agency not registered: " + id.str());
  return it->second;
}

namespace {

constexpr std::string_view kKeyHeader = "TRUSTWIRE-KEY v1 ";

std::string key_file(std::string_view kind, const BigInt& modulus, const BigInt& exponent) {
  std::ostringstream out;
  out << kKeyHeader << kind << '\n' << to_hex(modulus) << '\n' << to_hex(exponent) << '\n';
  return out.str();
}

}  // namespace

std::string to_key_file(const PublicKey& key) { return key_file("public", key.modulus, key.exponent); }
std::string to_key_file(const PrivateKey& key) { return key_file("private", key.modulus, key.exponent); }

std::variant<PublicKey, PrivateKey> parse_key_file(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header, modulus_hex, exponent_hex;
  if (!std::getline(in, header) || !std::getline(in, modulus_hex) || !std::getline(in, exponent_hex)) {
    throw DecodeError("key file truncated");
  }
  if (!header.starts_with(kKeyHeader)) throw DecodeError("missing TRUSTWIRE-KEY v1 header");
  const std::string kind = header.substr(kKeyHeader.size());
  const BigInt modulus = bigint_from_hex(modulus_hex);
  const BigInt exponent = bigint_from_hex(exponent_hex);
  if (modulus < 2) throw DecodeError("key modulus out of range");
  if (kind == "public") return PublicKey{modulus, exponent};
  if (kind == "private") return PrivateKey{modulus, exponent};
  throw DecodeError("unknown key kind '" + kind + "'");
}

}  // namespace trustwire
