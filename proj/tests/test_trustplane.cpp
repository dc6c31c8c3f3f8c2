#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <set>

#include "test_support.hpp"
#include "trustwire/errors.hpp"
#include "trustwire/trustplane.hpp"

using namespace trustwire;

namespace {

std::uint64_t bits_of(double v) { return std::bit_cast<std::uint64_t>(v); }

MappingFunction random_mapping(std::mt19937_64& rng, std::size_t ops) {
  static constexpr MapOp kOps[] = {MapOp::Add, MapOp::Sub, MapOp::Mul, MapOp::Div};
  std::vector<MapOp> out(ops);
  for (auto& op : out) op = kOps[rng() % 4];
  return MappingFunction(out);
}

RandomSet random_set(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint64_t> values(n);
  for (auto& v : values) v = rng();
  return RandomSet(values);
}

const SelectionSeed kSeed{"CIA", "FBI", "98LetT1"};

}  // namespace

TEST_CASE("mapping evaluation examples") {
  CHECK(fold_mapping(MappingFunction::parse("+"), RandomSet({2, 3})) == 5.0);
  CHECK(eval_mapping(MappingFunction::parse("+"), RandomSet({2, 3})) == -0.9589242746631385);
  CHECK(eval_mapping(MappingFunction::parse("*"), RandomSet({2, 3})) == -0.27941549819892586);
  CHECK(fold_mapping(MappingFunction::parse("-"), RandomSet({10, 20})) == 9007199254740871.0);
  CHECK(fold_mapping(MappingFunction::parse("/"), RandomSet({7, 3})) == 3002399751580296.0);
  CHECK(fold_mapping(MappingFunction::parse("/"), RandomSet({1, 2})) == 4503599627370441.0);
  CHECK(bits_of(eval_mapping(MappingFunction::parse("/"), RandomSet({1, 2}))) == 0xbfddd42157c979edULL);
  CHECK(fold_mapping(MappingFunction::parse("*"), RandomSet({~0ULL, 3})) == 681981.0);
  CHECK(bits_of(eval_mapping(MappingFunction::parse("*"), RandomSet({~0ULL, 3}))) == 0xbfe98f1eb759d0beULL);
  // Division by zero leaves the accumulator alone.
  CHECK(fold_mapping(MappingFunction::parse("/"), RandomSet({9, 0})) == 9.0);
  CHECK(fold_mapping(MappingFunction(), RandomSet({42})) == 42.0);
}

TEST_CASE("mapping arity") {
  const auto fn = MappingFunction::parse("+*-/");
  CHECK(fn.arity() == 5);
  CHECK_THROWS_AS(fold_mapping(fn, RandomSet({1, 2, 3, 4})), ArityError);
  CHECK_THROWS_AS(eval_mapping(fn, RandomSet({1, 2, 3, 4, 5, 6})), ArityError);
}

TEST_CASE("mapping parse forms") {
  CHECK(MappingFunction::parse("+x*/").to_string() == "+**/");
  CHECK(MappingFunction::parse("\xC3\x97\xC3\xB7\xE2\x88\x92").to_string() == "*/-");
  CHECK_THROWS_AS(MappingFunction::parse("+%"), InvalidArgumentError);
  CHECK_THROWS_AS(MappingFunction::parse(std::string(32, '+')), InvalidArgumentError);
  CHECK(MappingFunction::parse(std::string(31, '+')).arity() == 32);
}

TEST_CASE("mapping is sensitive to every single-bit change of S_R") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 32;
    const auto fn = random_mapping(rng, n - 1);
    const auto set = random_set(rng, n);
    auto values = set.values();
    values[rng() % n] ^= 1ULL << (rng() % 64);
    CHECK(bits_of(eval_mapping(fn, set)) != bits_of(eval_mapping(fn, RandomSet(values))));
  }
}

TEST_CASE("trust level validation and disclosure count") {
  CHECK_THROWS_AS(checked_trust_level(-0.01), InvalidArgumentError);
  CHECK_THROWS_AS(checked_trust_level(1.01), InvalidArgumentError);
  CHECK_THROWS_AS(checked_trust_level(std::nan("")), InvalidArgumentError);
  CHECK(checked_trust_level(0.0) == 0.0);
  CHECK(disclosure_count(0.7, 10) == 7);
  CHECK(disclosure_count(0.3, 10) == 3);
  CHECK(disclosure_count(0.9, 10) == 9);
  CHECK(disclosure_count(0.5, 3) == 2);
  CHECK(disclosure_count(0.0, 10) == 0);
  CHECK(disclosure_count(1.0, 10) == 10);
  CHECK(disclosure_count(0.5, 0) == 0);
}

TEST_CASE("trust filter examples") {
  const auto items = testing::range_items(11, 20);
  const auto shared = trust_filter(items, 0.9, kSeed);
  CHECK(shared.items.size() == 9);
  CHECK(shared.trust_level_used == 0.9);
  CHECK(testing::is_subset(shared.items, items));
  CHECK(trust_filter(items, 0.0, kSeed).items.empty());
  CHECK(trust_filter(items, 1.0, kSeed).items.size() == 10);
  CHECK(trust_filter({}, 0.5, kSeed).items.empty());
  CHECK(trust_filter(items, 0.9, kSeed).items == shared.items);
}

TEST_CASE("trust filter laws") {
  // Oracle: with trust k/10 the count is the integer ceil(k*n/10).
  std::set<std::vector<std::string>> distinct_orders;
  for (std::size_t n = 0; n <= 32; ++n) {
    std::vector<std::string> items;
    for (std::size_t i = 0; i < n; ++i) items.push_back("item" + std::to_string(i));
    std::vector<std::string> previous;
    for (int k = 0; k <= 10; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      const auto shared = trust_filter(items, k / 10.0, kSeed).items;
      CHECK(shared.size() == (static_cast<std::size_t>(k) * n + 9) / 10);
      CHECK(testing::is_subset(shared, items));
      CHECK(std::set<std::string>(shared.begin(), shared.end()).size() == shared.size());
      CHECK(std::equal(previous.begin(), previous.end(), shared.begin()));
      previous = shared;
    }
  }
  const auto items = testing::range_items(1, 10);
  for (const char* code : {"a", "b", "c", "d", "e"}) {
    distinct_orders.insert(trust_filter(items, 1.0, {"CIA", "FBI", code}).items);
  }
  CHECK(distinct_orders.size() > 1);
}

TEST_CASE("selection order is a permutation") {
  for (std::size_t n : {0u, 1u, 2u, 10u, 100u}) {
    auto order = selection_order(kSeed, n);
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < n; ++i) CHECK(order[i] == i);
    CHECK(order.size() == n);
  }
}

TEST_CASE("trust plane lookup") {
  const auto& trust = testing::world().trust;
  const AgencyId cia("CIA"), fbi("FBI"), raw("RAW"), isi("ISI");
  CHECK(trust.lookup(cia, fbi, "98LetT1").trust_level == 0.9);
  CHECK(trust.lookup(cia, fbi, "06TalT9").trust_level == 0.4);
  CHECK(trust.lookup(raw, cia, "06TalT6").trust_level == 0.3);
  CHECK(trust.lookup(raw, cia, "03AlqT3").trust_level == 0.4);
  CHECK(trust.lookup(cia, fbi, "x").mapping.to_string() == "+*-/");
  CHECK_THROWS_AS(trust.lookup(fbi, isi, "98LetT1"), NoTrustRecordError);
  CHECK_THROWS_AS(trust.record(fbi, isi), NoTrustRecordError);

  TrustPlane plane;
  plane.add({cia, fbi, 0.5, MappingFunction::parse("+"), {}});
  CHECK_THROWS_AS(plane.add({cia, fbi, 0.6, MappingFunction::parse("+"), {}}), ConfigError);
  CHECK_THROWS_AS(plane.add({fbi, cia, 1.5, MappingFunction::parse("+"), {}}), InvalidArgumentError);
  CHECK_THROWS_AS(plane.add({fbi, cia, 0.5, MappingFunction::parse("+"), {{"x", -0.1}}}), InvalidArgumentError);
  CHECK(plane.contains(cia, fbi));
  CHECK_FALSE(plane.contains(fbi, cia));
}
