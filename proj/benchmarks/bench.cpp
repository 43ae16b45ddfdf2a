#include <benchmark/benchmark.h>

#include "slotnet/engine.hpp"
#include "slotnet/insertion.hpp"
#include "slotnet/partition.hpp"
#include "slotnet/random.hpp"
#include "slotnet/ring.hpp"
#include "support/scenarios.hpp"

using namespace slotnet;

namespace {

RingConfig ring_config(std::uint32_t n, std::uint32_t batch) {
  RingConfig c;
  c.num_slots = n;
  c.slot_size = 1500;
  c.batch_size = batch;
  return c;
}

// One slot transmitted, one reclaim per batch: the steady-state driver loop.
void BM_RingSteadyState(benchmark::State& state) {
  const auto batch = static_cast<std::uint32_t>(state.range(0));
  DmaRing ring(ring_config(512, batch));
  std::uint64_t slot = 0;
  for (auto _ : state) {
    if (slot++ % batch == 0) benchmark::DoNotOptimize(ring.poll_cycle());
    benchmark::DoNotOptimize(ring.nic_consume(1));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RingSteadyState)->Arg(1)->Arg(8)->Arg(64);

void BM_TryInsert(benchmark::State& state) {
  const auto mode = state.range(0) ? InsertMode::Relaxed : InsertMode::Strict;
  const std::uint32_t n = 256;
  const Nanos slot = 12'000;
  std::vector<ClassId> owners(n, kBestEffortClass);
  for (std::uint32_t i = 0; i < n; i += 4) owners[i] = 1;
  DmaRing ring(ring_config(n, 8), owners);
  EphcClock clock(PreciseNs::from_ns(slot));
  std::uint64_t target = 16;
  for (auto _ : state) {
    OutboundPacket p;
    p.flow_id = 1;
    p.traffic_class = 1;
    p.payload_len = 64;
    p.scheduled_time = static_cast<Nanos>(target) * slot;
    benchmark::DoNotOptimize(try_insert(ring, p, clock, mode));
    target += 4;
    if (target >= ring.consumer_index() + n - 8) {
      state.PauseTiming();
      ring.poll_cycle();
      const auto k = ring.outstanding();
      ring.nic_consume(k);
      clock.tick(k);
      ring.poll_cycle();
      target = ring.consumer_index() + 16;
      state.ResumeTiming();
    }
  }
}
BENCHMARK(BM_TryInsert)->Arg(0)->Arg(1);

void BM_Solve(benchmark::State& state) {
  SweepParams p;
  const double u = static_cast<double>(state.range(0)) / 100.0;
  const auto instances = generate_instances(p, u, 42, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(instances[i++ % instances.size()], std::chrono::seconds(10)));
}
BENCHMARK(BM_Solve)->Arg(10)->Arg(30)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_EngineBackToBack(benchmark::State& state) {
  SenderConfig s;
  s.ring = support::ring(32, 1250, 8);
  s.ownership = support::spread(32, 1, 0.25);
  s.policy.release_delta = 150'000;
  s.rt_flows.push_back(support::rt_flow(1, 200'000, 1'000'000));
  s.be_flows.push_back(support::be_flow(2, 1200));
  const auto scenario = support::back_to_back(s, 10'000'000);
  for (auto _ : state) benchmark::DoNotOptimize(run(scenario));
  state.counters["sim_slots_per_s"] =
      benchmark::Counter(static_cast<double>(state.iterations()) * 1000.0, benchmark::Counter::kIsRate);
}
BENCHMARK(BM_EngineBackToBack)->Unit(benchmark::kMillisecond);

void BM_EngineBridgeRing(benchmark::State& state) {
  const auto m = support::ring_of_bridges();
  for (auto _ : state) benchmark::DoNotOptimize(run(m.scenario));
}
BENCHMARK(BM_EngineBridgeRing)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
