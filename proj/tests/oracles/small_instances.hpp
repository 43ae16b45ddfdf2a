#pragma once

// Random partition problems small enough for the exhaustive oracle:
// N <= 6 ring positions and a horizon of at most four ring revolutions.

#include <vector>

#include "slotnet/partition.hpp"
#include "slotnet/random.hpp"

namespace oracle {

inline slotnet::ProblemInstance small_instance(slotnet::Rng& rng) {
  const slotnet::Nanos delta = 10'000;
  const auto n = static_cast<std::uint32_t>(rng.between(1, 6));
  const auto cycles = static_cast<std::int64_t>(rng.between(1, 4));
  const std::int64_t L = cycles * n;
  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 1; d <= L; ++d)
    if (L % d == 0) divisors.push_back(d);

  const auto apps = static_cast<std::uint32_t>(rng.between(1, 3));
  const auto flow_count = static_cast<std::uint32_t>(rng.between(apps, 4));
  std::vector<slotnet::FlowSpec> flows;
  std::vector<std::uint32_t> next_id(apps + 1, 0);
  for (std::uint32_t i = 0; i < flow_count; ++i) {
    slotnet::FlowSpec f;
    f.app = i < apps ? i + 1 : static_cast<slotnet::AppId>(rng.between(1, apps));
    f.flow = next_id[f.app]++;
    f.period = divisors[rng.between(0, divisors.size() - 1)] * delta;
    // Jitter anywhere in [0, period), not necessarily slot aligned.
    f.max_jitter = static_cast<slotnet::Nanos>(rng.between(0, static_cast<std::uint64_t>(f.period - 1)));
    if (rng.chance(0.3)) f.max_jitter = 0;
    flows.push_back(f);
  }
  return slotnet::ProblemInstance::make(std::move(flows), n, delta);
}

}  // namespace oracle
