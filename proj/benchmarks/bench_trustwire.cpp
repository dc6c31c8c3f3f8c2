#include <benchmark/benchmark.h>

#include <random>

#include "trustwire/simharness.hpp"

using namespace trustwire;

namespace {

Bytes random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

const KeyPair& bench_key() {
  static const KeyPair pair = generate_keypair(kDefaultKeyBits, 1);
  return pair;
}

void BM_Md5(benchmark::State& state) {
  const Bytes data = random_bytes(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(md5_digest(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Md5)->Arg(64)->Arg(4096)->Arg(1 << 20);

void BM_SealPublic(benchmark::State& state) {
  const Bytes data = random_bytes(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(seal(bench_key().pub, data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SealPublic)->Arg(62)->Arg(1024);

void BM_OpenPrivate(benchmark::State& state) {
  const Bytes sealed = seal(bench_key().pub, random_bytes(static_cast<std::size_t>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(open(bench_key().priv, sealed));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OpenPrivate)->Arg(62)->Arg(1024);

void BM_KeyGen(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_keypair(static_cast<unsigned>(state.range(0)), ++seed));
}
BENCHMARK(BM_KeyGen)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_FullExchange(benchmark::State& state) {
  Network network(canonical_table1_scenario());
  AgencyNode& cia = network.node(AgencyId("CIA"));
  AgencyNode& fbi = network.node(AgencyId("FBI"));
  const QueryPayload payload{"98LetT1", QueryKind::InfoItems};
  for (auto _ : state) {
    const auto out = cia.send_request(AgencyId("FBI"), payload);
    const auto response = fbi.handle_incoming(out.bytes);
    benchmark::DoNotOptimize(cia.accept_response(out.request_id, *response));
  }
}
BENCHMARK(BM_FullExchange)->Unit(benchmark::kMicrosecond);

void BM_Table1(benchmark::State& state) {
  const Scenario scenario = canonical_table1_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(scenario));
}
BENCHMARK(BM_Table1)->Unit(benchmark::kMillisecond);

void BM_TrustFilter(benchmark::State& state) {
  std::vector<std::string> items;
  for (int i = 0; i < state.range(0); ++i) items.push_back(std::to_string(i));
  const SelectionSeed seed{"CIA", "FBI", "98LetT1"};
  for (auto _ : state) benchmark::DoNotOptimize(trust_filter(items, 0.7, seed));
}
BENCHMARK(BM_TrustFilter)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
