#include <algorithm>
#include <atomic>
#include <thread>

#include "slotnet/partition.hpp"

namespace slotnet {

std::uint64_t sweep_point_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<SweepPoint> run_sweep(const SweepParams& params, unsigned jobs) {
  params.validate();
  struct Task {
    std::size_t point;
    ProblemInstance instance;
    SolveResult result;
    bool valid = true;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < params.utilizations.size(); ++i)
    for (auto& inst : generate_instances(params, params.utilizations[i], sweep_point_seed(params.seed, i),
                                         params.instances_per_point))
      tasks.push_back(Task{i, std::move(inst), {}, true});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      Task& t = tasks[k];
      t.result = solve(t.instance, params.timeout);
      if (t.result.status == SolveStatus::Feasible) t.valid = validate(t.instance, *t.result.solution).empty();
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < n; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<SweepPoint> out(params.utilizations.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].utilization = params.utilizations[i];
  for (const Task& t : tasks) {
    SweepPoint& p = out[t.point];
    ++p.instances;
    switch (t.result.status) {
      case SolveStatus::Feasible:
        if (t.valid) ++p.feasible; else ++p.invalid;
        break;
      case SolveStatus::Infeasible: ++p.infeasible; break;
      case SolveStatus::Timeout: ++p.timeout; break;
    }
    p.max_elapsed = std::max(p.max_elapsed, t.result.elapsed);
    p.total_elapsed += t.result.elapsed;
  }
  return out;
}

}  // namespace slotnet
