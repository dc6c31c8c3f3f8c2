#include "trustwire/digest.hpp"

#include <bit>

#include "trustwire/errors.hpp"

namespace trustwire {

namespace {

// Per-round shift amounts (RFC 1321 section 3.4).
constexpr std::array<int, 64> kShift = {
    7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22,
    5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20,
    4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23,
    6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21};

// T[i] = floor(2^32 * |sin(i + 1)|).
constexpr std::array<std::uint32_t, 64> kSine = {
    0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, 0xf57c0faf, 0x4787c62a, 0xa8304613, 0xfd469501,
    0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be, 0x6b901122, 0xfd987193, 0xa679438e, 0x49b40821,
    0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa, 0xd62f105d, 0x02441453, 0xd8a1e681, 0xe7d3fbc8,
    0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed, 0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a,
    0xfffa3942, 0x8771f681, 0x6d9d6122, 0xfde5380c, 0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70,
    0x289b7ec6, 0xeaa127fa, 0xd4ef3085, 0x04881d05, 0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665,
    0xf4292244, 0x432aff97, 0xab9423a7, 0xfc93a039, 0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1,
    0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1, 0xf7537e82, 0xbd3af235, 0x2ad7d2bb, 0xeb86d391};

struct State {
  std::uint32_t a = 0x67452301;
  std::uint32_t b = 0xefcdab89;
  std::uint32_t c = 0x98badcfe;
  std::uint32_t d = 0x10325476;
};

void process_block(State& s, const std::uint8_t* block) {
  std::array<std::uint32_t, 16> x{};
  for (std::size_t i = 0; i < 16; ++i) {
    x[i] = static_cast<std::uint32_t>(block[4 * i]) | static_cast<std::uint32_t>(block[4 * i + 1]) << 8 |
           static_cast<std::uint32_t>(block[4 * i + 2]) << 16 | static_cast<std::uint32_t>(block[4 * i + 3]) << 24;
  }

  std::uint32_t a = s.a, b = s.b, c = s.c, d = s.d;
  for (std::size_t i = 0; i < 64; ++i) {
    std::uint32_t f;
    std::size_t g;
    if (i < 16) {
      f = (b & c) | (~b & d);
      g = i;
    } else if (i < 32) {
      f = (b & d) | (c & ~d);
      g = (5 * i + 1) % 16;
    } else if (i < 48) {
      f = b ^ c ^ d;
      g = (3 * i + 5) % 16;
    } else {
      f = c ^ (b | ~d);
      g = (7 * i) % 16;
    }
    std::uint32_t rotated = std::rotl(a + f + kSine[i] + x[g], kShift[i]);
    a = d;
    d = c;
    c = b;
    b = b + rotated;
  }
  s.a += a;
  s.b += b;
  s.c += c;
  s.d += d;
}

void store_le(std::uint8_t* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

Digest Digest::from_bytes(ByteView bytes) {
  if (bytes.size() != kSize) throw LengthError("digest must be 16 bytes, got " + std::to_string(bytes.size()));
  std::array<std::uint8_t, kSize> raw{};
  std::copy(bytes.begin(), bytes.end(), raw.begin());
  return Digest(raw);
}

Digest Digest::from_hex(std::string_view hex) { return from_bytes(trustwire::from_hex(hex)); }

std::string Digest::hex() const { return to_hex(bytes_); }

bool operator==(const Digest& a, const Digest& b) noexcept {
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < Digest::kSize; ++i) diff |= a.bytes_[i] ^ b.bytes_[i];
  return diff == 0;
}

Digest md5_digest(ByteView message) {
  State state;
  const std::size_t full_blocks = message.size() / 64;
  for (std::size_t i = 0; i < full_blocks; ++i) process_block(state, message.data() + 64 * i);

  // Padding: 0x80, zeros to 56 mod 64, then the bit length as a little-endian u64.
  std::array<std::uint8_t, 128> tail{};
  const std::size_t rem = message.size() - 64 * full_blocks;
  std::copy(message.begin() + static_cast<std::ptrdiff_t>(64 * full_blocks), message.end(), tail.begin());
  tail[rem] = 0x80;
  const std::size_t tail_len = rem < 56 ? 64 : 128;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(message.size()) * 8;
  for (int i = 0; i < 8; ++i) tail[tail_len - 8 + i] = static_cast<std::uint8_t>(bit_len >> (8 * i));
  process_block(state, tail.data());
  if (tail_len == 128) process_block(state, tail.data() + 64);

  std::array<std::uint8_t, Digest::kSize> out{};
  store_le(out.data(), state.a);
  store_le(out.data() + 4, state.b);
  store_le(out.data() + 8, state.c);
  store_le(out.data() + 12, state.d);
  return Digest(out);
}

}  // namespace trustwire
