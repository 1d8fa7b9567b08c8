#include <benchmark/benchmark.h>

#include <random>

#include "ltescope/analytics.hpp"
#include "ltescope/floodsim.hpp"
#include "ltescope/mac_lte.hpp"
#include "ltescope/rrc.hpp"

using namespace ltescope;

namespace {

PagingMessage sample_message(std::mt19937_64& rng, std::size_t records) {
  PagingMessage msg;
  for (std::size_t i = 0; i < records; ++i) {
    msg.records.push_back({STmsi{static_cast<std::uint8_t>(rng() & 0xFF),
                                 static_cast<std::uint32_t>(rng())},
                           CnDomain::ps});
  }
  return msg;
}

void BM_EncodePcch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto msg = sample_message(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_pcch(msg));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EncodePcch)->Arg(1)->Arg(16);

void BM_DecodePcch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto payload = encode_pcch(sample_message(rng, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_pcch(payload));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DecodePcch)->Arg(1)->Arg(16);

void BM_ParseMacLteFraming(benchmark::State& state) {
  CaptureFrame frame;
  frame.rnti_type = RntiType::p_rnti;
  frame.rnti = kPagingRnti;
  frame.sfn = 512;
  frame.subframe = 3;
  frame.payload.assign(32, 0xAB);
  const auto record = serialize_mac_lte_framing(frame);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_mac_lte_framing(record));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ParseMacLteFraming);

void BM_AccumulatePaging(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<PagingMessage> messages;
  for (int i = 0; i < 1024; ++i) {
    messages.push_back(sample_message(rng, 1));
  }
  for (auto _ : state) {
    PagingStats stats;
    for (std::size_t i = 0; i < messages.size(); ++i) {
      accumulate(stats, messages[i], static_cast<std::int64_t>(i) * 1000);
    }
    benchmark::DoNotOptimize(stats);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_AccumulatePaging);

void BM_FloodSimulation(benchmark::State& state) {
  SimConfig cfg;
  cfg.resource_pool_size = 16;
  cfg.attacker_policy = AttackerPolicy::release_loop;
  cfg.attacker_loop_period_ms = 5.0;
  cfg.legit_arrival_rate_per_s = 50.0;
  cfg.legit_hold_time_ms = 100.0;
  cfg.duration_ms = static_cast<double>(state.range(0));
  cfg.rng_seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(cfg));
  }
}
BENCHMARK(BM_FloodSimulation)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
