#pragma once

#include <cstdint>
#include <optional>

#include "slotnet/ring.hpp"
#include "slotnet/time.hpp"

namespace slotnet {

/// Packet-counter clock: now = cycle_count * cycle_period + offset.
class EphcClock {
 public:
  EphcClock() : EphcClock(PreciseNs::from_ns(1)) {}
  explicit EphcClock(PreciseNs cycle_period, PreciseNs offset = {});

  /// Clock whose period is one slot of the given ring.
  static EphcClock for_ring(const RingConfig& config);

  std::uint64_t cycle_count() const { return count_; }
  PreciseNs cycle_period() const { return period_; }
  PreciseNs offset() const { return offset_; }

  Nanos now() const { return now_precise().round(); }
  PreciseNs now_precise() const { return time_at(count_); }
  PreciseNs time_at(std::uint64_t count) const { return period_ * count + offset_; }

  /// Counter value whose cycle contains t, or nullopt when t precedes cycle 0.
  std::optional<std::uint64_t> count_at(Nanos t) const;

  void tick(std::uint64_t n = 1) { count_ += n; }
  void adjust_offset(PreciseNs delta) { offset_ += delta; }
  void adjust_offset(Nanos delta) { offset_ += PreciseNs::from_ns(delta); }
  void set_time(PreciseNs t) { offset_ = t - period_ * count_; }
  void set_time(Nanos t) { set_time(PreciseNs::from_ns(t)); }

  /// Scale the cycle period by `ratio`, re-anchoring the offset so now() is
  /// continuous across the change.
  void adjust_rate(const Rational& ratio);

 private:
  std::uint64_t count_ = 0;
  PreciseNs period_;
  PreciseNs offset_;
};

std::uint32_t time_to_slot(Nanos t, Nanos delta, std::uint32_t num_slots);
std::uint32_t time_to_slot(PreciseNs t, PreciseNs delta, std::uint32_t num_slots);

/// Independent transmit and receive clocks of one node.
struct DualClock {
  EphcClock tx;
  EphcClock rx;
  Nanos tau = 0;  // serialization time of one slot
};

enum class MergeAction { None, SetTxToRx, SetRxToTx };

const char* to_string(MergeAction a);

struct MergeResult {
  PreciseNs merged;
  MergeAction action = MergeAction::None;
  Nanos merged_ns() const { return merged.round(); }
};

/// Combine the two clocks into one timestamp. On a large divergence the
/// lagging clock is stepped to the leading one.
MergeResult merge(DualClock& clocks);

}  // namespace slotnet
