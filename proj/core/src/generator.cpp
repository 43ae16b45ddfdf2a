#include <algorithm>
#include <cmath>

#include "slotnet/partition.hpp"
#include "slotnet/random.hpp"

namespace slotnet {

void SweepParams::validate() const {
  if (ring_size == 0 || slot <= 0) throw std::invalid_argument("ring_size and slot must be positive");
  if (min_period <= 0 || max_period < min_period || period_step <= 0)
    throw std::invalid_argument("period range must be positive and ordered");
  if (min_period % slot != 0 || period_step % slot != 0)
    throw std::invalid_argument("periods must be multiples of the slot duration");
  if (jitter_min < 0 || jitter_max < jitter_min) throw std::invalid_argument("jitter range must be ordered and >= 0");
  if (max_classes == 0) throw std::invalid_argument("max_classes must be positive");
  if (flow_counts.empty()) throw std::invalid_argument("flow_counts must not be empty");
  for (auto c : flow_counts)
    if (c == 0) throw std::invalid_argument("flow counts must be positive");
  for (double u : utilizations)
    if (u < 0 || u > 1) throw std::invalid_argument("utilization targets must lie in [0, 1]");
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
}

namespace {

std::vector<Nanos> chain_from(Nanos base, Nanos max_period) {
  std::vector<Nanos> chain;
  for (Nanos p = base; p <= max_period; p *= 2) chain.push_back(p);
  return chain;
}

struct Draft {
  std::vector<std::size_t> level;  // index into the chain per flow
  double total = 0;
};

// Spread `target` over n flows (UUniFast), snap each share to the nearest
// chain period, then nudge periods until the sum is within tolerance.
std::optional<Draft> fit_periods(const std::vector<Nanos>& chain, Nanos slot, std::uint32_t n, double target,
                                 double tolerance, Rng& rng) {
  auto share = [&](std::size_t lv) { return static_cast<double>(slot) / static_cast<double>(chain[lv]); };
  Draft d;
  d.level.resize(n);
  double rest = target;
  for (std::uint32_t i = 0; i < n; ++i) {
    double u = rest;
    if (i + 1 < n) {
      const double next = rest * std::pow(rng.unit(), 1.0 / static_cast<double>(n - i - 1));
      u = rest - next;
      rest = next;
    }
    std::size_t best = 0;
    for (std::size_t lv = 1; lv < chain.size(); ++lv)
      if (std::fabs(std::log(share(lv) / std::max(u, 1e-9))) < std::fabs(std::log(share(best) / std::max(u, 1e-9))))
        best = lv;
    d.level[i] = best;
  }
  auto sum = [&] {
    double s = 0;
    for (auto lv : d.level) s += share(lv);
    return s;
  };
  d.total = sum();
  for (int guard = 0; guard < 256 && std::fabs(d.total - target) > tolerance; ++guard) {
    std::vector<std::size_t> movable;
    const bool too_high = d.total > target;
    for (std::size_t i = 0; i < n; ++i)
      if (too_high ? d.level[i] + 1 < chain.size() : d.level[i] > 0) movable.push_back(i);
    if (movable.empty()) return std::nullopt;
    const std::size_t pick = movable[rng.between(0, movable.size() - 1)];
    d.level[pick] = too_high ? d.level[pick] + 1 : d.level[pick] - 1;
    d.total = sum();
  }
  if (std::fabs(d.total - target) > tolerance) return std::nullopt;
  return d;
}

}  // namespace

std::vector<ProblemInstance> generate_instances(const SweepParams& params, double target, std::uint64_t seed,
                                                std::uint32_t count) {
  params.validate();
  if (target < 0 || target > 1) throw std::invalid_argument("utilization target must lie in [0, 1]");
  std::vector<ProblemInstance> out;
  if (target == 0) {
    for (std::uint32_t i = 0; i < count; ++i) out.push_back(ProblemInstance::make({}, params.ring_size, params.slot));
    return out;
  }

  std::vector<Nanos> bases;
  for (Nanos p = params.min_period; p <= params.max_period; p += params.period_step) bases.push_back(p);
  const double tolerance = 0.0125;

  Rng rng(seed);
  while (out.size() < count) {
    // Flow counts and chain bases that can reach the target at all.
    std::vector<std::pair<std::uint32_t, Nanos>> options;
    for (auto n : params.flow_counts) {
      for (Nanos b : bases) {
        const auto chain = chain_from(b, params.max_period);
        const double hi = n * static_cast<double>(params.slot) / static_cast<double>(chain.front());
        const double lo = n * static_cast<double>(params.slot) / static_cast<double>(chain.back());
        if (lo <= target + tolerance && hi >= target - tolerance) options.emplace_back(n, b);
      }
    }
    if (options.empty()) throw std::invalid_argument("no flow count / period chain reaches the utilization target");
    std::vector<std::uint32_t> counts;
    for (const auto& o : options)
      if (counts.empty() || counts.back() != o.first) counts.push_back(o.first);
    const std::uint32_t n = counts[rng.between(0, counts.size() - 1)];
    std::vector<Nanos> usable;
    for (const auto& o : options)
      if (o.first == n) usable.push_back(o.second);
    const Nanos base = usable[rng.between(0, usable.size() - 1)];
    const auto chain = chain_from(base, params.max_period);

    auto draft = fit_periods(chain, params.slot, n, target, tolerance, rng);
    if (!draft) continue;

    const std::uint32_t classes = static_cast<std::uint32_t>(rng.between(1, std::min(params.max_classes, n)));
    std::vector<AppId> app_of(n);
    for (std::uint32_t i = 0; i < n; ++i)
      app_of[i] = i < classes ? i + 1 : static_cast<AppId>(rng.between(1, classes));

    std::vector<FlowSpec> flows;
    std::vector<std::uint32_t> next_flow(classes + 1, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      FlowSpec f;
      f.app = app_of[i];
      f.flow = next_flow[f.app]++;
      f.period = chain[draft->level[i]];
      f.max_jitter = static_cast<Nanos>(
          std::llround(rng.uniform(params.jitter_min, params.jitter_max) * static_cast<double>(f.period)));
      f.packet_size = params.packet_size;
      flows.push_back(f);
    }
    std::stable_sort(flows.begin(), flows.end(), [](const FlowSpec& a, const FlowSpec& b) {
      return a.app != b.app ? a.app < b.app : a.flow < b.flow;
    });
    out.push_back(ProblemInstance::make(std::move(flows), params.ring_size, params.slot));
  }
  return out;
}

}  // namespace slotnet
