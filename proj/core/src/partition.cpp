#include "slotnet/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace slotnet {

namespace {

Nanos checked_lcm(Nanos a, Nanos b) {
  const Nanos g = std::gcd(a, b);
  const Nanos q = a / g;
  if (q > std::numeric_limits<Nanos>::max() / b) throw Overflow("hyperperiod exceeds the time range");
  return q * b;
}

std::string key_text(const InstanceKey& k) {
  return "(" + std::to_string(k.app) + "," + std::to_string(k.flow) + "," + std::to_string(k.instance) + ")";
}

}  // namespace

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::SlotOutsidePartition: return "slot_outside_partition";
    case ViolationKind::JitterBound: return "jitter_bound";
    case ViolationKind::SameAppCollision: return "same_app_collision";
    case ViolationKind::CrossAppCollision: return "cross_app_collision";
    case ViolationKind::PartitionOverlap: return "partition_overlap";
    case ViolationKind::MissingInstance: return "missing_instance";
    case ViolationKind::UnknownInstance: return "unknown_instance";
    case ViolationKind::MisalignedTime: return "misaligned_time";
    case ViolationKind::OutsideHorizon: return "outside_horizon";
    case ViolationKind::SlotOutOfRange: return "slot_out_of_range";
  }
  return "?";
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Timeout: return "timeout";
  }
  return "?";
}

Nanos hyperperiod(std::span<const FlowSpec> flows) {
  if (flows.empty()) throw std::invalid_argument("hyperperiod of an empty flow set");
  Nanos h = 1;
  for (const auto& f : flows) {
    if (f.period <= 0) throw std::invalid_argument("flow period must be positive");
    h = checked_lcm(h, f.period);
  }
  return h;
}

double utilization(const ProblemInstance& instance) {
  double u = 0;
  for (const auto& f : instance.flows) u += static_cast<double>(instance.slot) / static_cast<double>(f.period);
  return u;
}

ProblemInstance ProblemInstance::make(std::vector<FlowSpec> flows, std::uint32_t ring_size, Nanos slot) {
  ProblemInstance p;
  p.ring_size = ring_size;
  p.slot = slot;
  if (ring_size == 0 || slot <= 0) throw InvalidInstance("ring size and slot must be positive");
  const Nanos cycle = static_cast<Nanos>(ring_size) * slot;
  p.horizon = flows.empty() ? cycle : checked_lcm(hyperperiod(flows), cycle);
  p.flows = std::move(flows);
  p.validate();
  return p;
}

void ProblemInstance::validate() const {
  if (ring_size == 0) throw InvalidInstance("ring size must be positive");
  if (slot <= 0) throw InvalidInstance("slot duration must be positive");
  const Nanos cycle = static_cast<Nanos>(ring_size) * slot;
  if (horizon <= 0 || horizon % cycle != 0) throw InvalidInstance("horizon must be a positive multiple of N * slot");
  std::set<std::pair<AppId, std::uint32_t>> ids;
  for (const auto& f : flows) {
    if (f.period <= 0 || f.period % slot != 0)
      throw InvalidInstance("flow (" + std::to_string(f.app) + "," + std::to_string(f.flow) +
                            "): period must be a positive multiple of the slot duration");
    if (f.max_jitter < 0) throw InvalidInstance("flow jitter must be non-negative");
    if (horizon % f.period != 0) throw InvalidInstance("horizon must be a multiple of every flow period");
    if (!ids.insert({f.app, f.flow}).second)
      throw InvalidInstance("duplicate flow (" + std::to_string(f.app) + "," + std::to_string(f.flow) + ")");
  }
}

std::vector<Violation> validate(const ProblemInstance& inst, const Solution& sol) {
  std::vector<Violation> out;
  const Nanos delta = inst.slot;
  const std::uint32_t n = inst.ring_size;

  std::map<std::uint32_t, AppId> owner;
  for (const auto& [app, slots] : sol.partitions) {
    for (std::uint32_t s : slots) {
      if (s >= n) {
        out.push_back({ViolationKind::SlotOutOfRange, {app, 0, 0}, std::nullopt,
                       "slot " + std::to_string(s) + " outside ring of " + std::to_string(n)});
        continue;
      }
      auto [it, fresh] = owner.emplace(s, app);
      if (!fresh)
        out.push_back({ViolationKind::PartitionOverlap, {app, 0, 0}, InstanceKey{it->second, 0, 0},
                       "slot " + std::to_string(s) + " owned by apps " + std::to_string(it->second) + " and " +
                           std::to_string(app)});
    }
  }

  std::set<InstanceKey> expected;
  for (const auto& f : inst.flows) {
    const auto m = static_cast<std::uint32_t>(inst.instances_of(f));
    for (std::uint32_t l = 0; l < m; ++l) expected.insert({f.app, f.flow, l});
  }
  for (const auto& [key, t] : sol.schedule)
    if (!expected.count(key))
      out.push_back({ViolationKind::UnknownInstance, key, std::nullopt, key_text(key) + " is not part of the instance"});

  std::map<Nanos, std::vector<InstanceKey>> by_time;
  for (const auto& f : inst.flows) {
    const auto m = static_cast<std::uint32_t>(inst.instances_of(f));
    std::vector<std::optional<Nanos>> times(m);
    for (std::uint32_t l = 0; l < m; ++l) {
      const InstanceKey key{f.app, f.flow, l};
      auto it = sol.schedule.find(key);
      if (it == sol.schedule.end()) {
        out.push_back({ViolationKind::MissingInstance, key, std::nullopt, key_text(key) + " has no time"});
        continue;
      }
      const Nanos t = it->second;
      times[l] = t;
      by_time[t].push_back(key);
      if (t % delta != 0)
        out.push_back({ViolationKind::MisalignedTime, key, std::nullopt, key_text(key) + " at " + std::to_string(t)});
      if (t < 0 || t >= inst.horizon)
        out.push_back({ViolationKind::OutsideHorizon, key, std::nullopt, key_text(key) + " at " + std::to_string(t)});
      const Nanos k = t >= 0 ? t / delta : (t - delta + 1) / delta;
      const auto slot = static_cast<std::uint32_t>(((k % n) + n) % n);
      auto own = sol.partitions.find(f.app);
      if (own == sol.partitions.end() || !own->second.count(slot))
        out.push_back({ViolationKind::SlotOutsidePartition, key, std::nullopt,
                       key_text(key) + " uses slot " + std::to_string(slot)});
    }
    for (std::uint32_t a = 0; a < m; ++a) {
      for (std::uint32_t b = a + 1; b < m; ++b) {
        if (!times[a] || !times[b]) continue;
        const Nanos gap = *times[a] > *times[b] ? *times[a] - *times[b] : *times[b] - *times[a];
        const Nanos dev = gap - static_cast<Nanos>(b - a) * f.period;
        if ((dev < 0 ? -dev : dev) > f.max_jitter)
          out.push_back({ViolationKind::JitterBound, {f.app, f.flow, a}, InstanceKey{f.app, f.flow, b},
                         "deviation " + std::to_string(dev) + " exceeds " + std::to_string(f.max_jitter)});
      }
    }
  }

  for (const auto& [t, keys] : by_time) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      for (std::size_t j = i + 1; j < keys.size(); ++j) {
        const auto kind = keys[i].app == keys[j].app ? ViolationKind::SameAppCollision : ViolationKind::CrossAppCollision;
        out.push_back({kind, keys[i], keys[j], "both at " + std::to_string(t)});
      }
    }
  }
  return out;
}

}  // namespace slotnet
