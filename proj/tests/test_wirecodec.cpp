#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "test_support.hpp"
#include "trustwire/errors.hpp"
#include "trustwire/wirecodec.hpp"

using namespace trustwire;

namespace {

std::vector<Field> random_fields(std::mt19937_64& rng) {
  std::vector<Field> fields(rng() % 6);
  for (auto& f : fields) {
    f.tag = static_cast<FieldTag>(1 + rng() % 8);
    f.payload = testing::random_bytes(rng, rng() % 40);
  }
  return fields;
}

}  // namespace

TEST_CASE("field encoding worked examples") {
  CHECK(to_hex(encode_fields({})) == "545731");
  CHECK(to_hex(encode_fields({{FieldTag::AgencyId, to_bytes("CIA")}})) == "5457310200000003434941");
  CHECK(to_hex(encode_fields({{FieldTag::Digest, {}}, {FieldTag::ResponsePayload, {0xab}}})) ==
        "5457310500000000080000000" "1ab");
}

TEST_CASE("field decoding errors") {
  CHECK_THROWS_AS(decode_fields(from_hex("")), BadMagicError);
  CHECK_THROWS_AS(decode_fields(from_hex("545732")), BadMagicError);
  CHECK_THROWS_AS(decode_fields(from_hex("5457310900000000")), UnknownTagError);
  CHECK_THROWS_AS(decode_fields(from_hex("5457310000000000")), UnknownTagError);
  CHECK_THROWS_AS(decode_fields(from_hex("54573102000000")), TruncatedError);
  CHECK_THROWS_AS(decode_fields(from_hex("54573102000000034349")), TruncatedError);
  CHECK_THROWS_AS(decode_fields(from_hex("54573102000000054349")), TruncatedError);
  CHECK(decode_fields(from_hex("545731")).empty());
}

TEST_CASE("field codec round-trips and is injective") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = random_fields(rng);
    const auto b = random_fields(rng);
    const Bytes ea = encode_fields(a);
    CHECK(decode_fields(ea) == a);
    CHECK((ea == encode_fields(b)) == (a == b));
  }
  const Bytes split1 = encode_fields({{FieldTag::AgencyId, to_bytes("ab")}, {FieldTag::AgencyId, to_bytes("c")}});
  const Bytes split2 = encode_fields({{FieldTag::AgencyId, to_bytes("a")}, {FieldTag::AgencyId, to_bytes("bc")}});
  CHECK(split1 != split2);
}

TEST_CASE("binary64 encoding") {
  auto hex_of = [](double v) {
    const auto raw = encode_f64(v);
    return to_hex(ByteView(raw));
  };
  CHECK(hex_of(0.0) == "0000000000000000");
  CHECK(hex_of(1.0) == "3ff0000000000000");
  CHECK(hex_of(std::sin(6.0)) == "bfd1e1f18ab0a2c0");
  CHECK(hex_of(-0.0) == "8000000000000000");
  CHECK(std::signbit(decode_f64(from_hex("8000000000000000"))));
  CHECK(decode_f64(from_hex("bfd1e1f18ab0a2c0")) == -0.27941549819892586);
  CHECK_THROWS_AS(decode_f64(from_hex("3ff00000000000")), LengthError);
  CHECK_THROWS_AS(decode_f64(from_hex("3ff000000000000000")), LengthError);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t bits = rng();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    const auto raw = encode_f64(v);
    const double back = decode_f64(ByteView(raw));
    std::uint64_t back_bits;
    std::memcpy(&back_bits, &back, sizeof back);
    CHECK(back_bits == bits);
  }
}

TEST_CASE("random set codec") {
  CHECK_THROWS_AS(RandomSet({}), InvalidArgumentError);
  CHECK_THROWS_AS(RandomSet(std::vector<std::uint64_t>(33, 1)), InvalidArgumentError);
  CHECK(RandomSet(std::vector<std::uint64_t>(32, 1)).size() == 32);

  const RandomSet set({1, 0x0102030405060708ULL});
  CHECK(to_hex(encode_random_set(set)) == "00000000000000010102030405060708");
  CHECK(decode_random_set(encode_random_set(set)) == set);
  CHECK_THROWS_AS(decode_random_set(Bytes{}), DecodeError);
  CHECK_THROWS_AS(decode_random_set(Bytes(9)), DecodeError);
  CHECK_THROWS_AS(decode_random_set(Bytes(264)), DecodeError);
}
