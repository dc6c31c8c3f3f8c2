#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "trustwire/digest.hpp"
#include "trustwire/errors.hpp"

using namespace trustwire;

namespace {

std::string md5_hex(std::string_view s) { return md5_digest(to_bytes(s)).hex(); }

Bytes pattern(std::size_t n) {
  Bytes out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>((i * 7 + 3) & 0xff);
  return out;
}

}  // namespace

TEST_CASE("md5 matches the RFC 1321 test suite") {
  CHECK(md5_hex("") == "d41d8cd98f00b204e9800998ecf8427e");
  CHECK(md5_hex("a") == "0cc175b9c0f1b6a831c399e269772661");
  CHECK(md5_hex("abc") == "900150983cd24fb0d6963f7d28e17f72");
  CHECK(md5_hex("message digest") == "f96b697d7cb7938d525a2f31aaf161d0");
  CHECK(md5_hex("abcdefghijklmnopqrstuvwxyz") == "c3fcd3d76192e4007dfb496cca67e13b");
  CHECK(md5_hex("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789") ==
        "d174ab98d277d9f5a5611c2c9f419d9f");
  CHECK(md5_hex("12345678901234567890123456789012345678901234567890123456789012345678901234567890") ==
        "57edf4a22be3c955ac49da2e2107b67a");
}

TEST_CASE("md5 padding boundaries") {
  // Frozen from Python hashlib over bytes (7*i + 3) mod 256.
  const std::vector<std::pair<std::size_t, std::string>> cases = {
      {55, "52c0e574e1198de5fe3f8f11440dcb1b"},   {56, "46c9907fc908ee68b1e7b8e71286a518"},
      {57, "1c805dd236c35cab25fcb1bc73802c51"},   {63, "a62f6d59e837867693f042f5b8f5a236"},
      {64, "7160b8fb5e9e4023d549c3971fbaeead"},   {65, "70bd662e7aefbda85a0f7244167b7897"},
      {119, "e84905d4214f4d1ca56c2cdcc152b143"},  {120, "e3eb5a6c8669ea01a8c185b8abc8a5dc"},
      {128, "10b2da1a82f16d99a81a7203fe9f02cb"},  {1000, "10046f077f2082ac19676b8079f1cb1a"},
  };
  for (const auto& [len, hex] : cases) {
    CAPTURE(len);
    CHECK(md5_digest(pattern(len)).hex() == hex);
  }
}

TEST_CASE("md5 is deterministic and sensitive to every single-bit flip") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    Bytes msg = testing::random_bytes(rng, 1 + rng() % 300);
    const Digest before = md5_digest(msg);
    CHECK(md5_digest(msg) == before);
    msg[rng() % msg.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    CHECK_FALSE(md5_digest(msg) == before);
  }
}

TEST_CASE("digest construction and rendering") {
  const Digest d = md5_digest(to_bytes("abc"));
  CHECK(d.hex().size() == 32);
  CHECK(Digest::from_hex(d.hex()) == d);
  CHECK(Digest::from_bytes(d.view()) == d);
  CHECK_THROWS_AS(Digest::from_bytes(Bytes(15)), LengthError);
  CHECK_THROWS_AS(Digest::from_bytes(Bytes(17)), LengthError);
  CHECK_THROWS_AS(Digest::from_hex("zz"), LengthError);

  auto raw = d.bytes();
  raw[15] ^= 1;
  CHECK_FALSE(Digest(raw) == d);
}
