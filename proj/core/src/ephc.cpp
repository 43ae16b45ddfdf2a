#include "slotnet/ephc.hpp"

#include <stdexcept>

namespace slotnet {

EphcClock::EphcClock(PreciseNs cycle_period, PreciseNs offset) : period_(cycle_period), offset_(offset) {
  if (cycle_period.raw() <= 0) throw std::invalid_argument("cycle_period must be positive");
}

EphcClock EphcClock::for_ring(const RingConfig& config) {
  config.validate();
  return EphcClock(config.wire_time());
}

std::optional<std::uint64_t> EphcClock::count_at(Nanos t) const {
  const int128 rel = PreciseNs::from_ns(t).raw() - offset_.raw();
  if (rel < 0) return std::nullopt;
  return static_cast<std::uint64_t>(rel / period_.raw());
}

void EphcClock::adjust_rate(const Rational& ratio) {
  if (ratio.num() <= 0) throw std::invalid_argument("rate ratio must be positive");
  const PreciseNs before = now_precise();
  period_ = period_.scaled(ratio);
  if (period_.raw() <= 0) throw std::invalid_argument("rate ratio collapses the cycle period");
  offset_ = before - period_ * count_;
}

std::uint32_t time_to_slot(Nanos t, Nanos delta, std::uint32_t num_slots) {
  if (delta <= 0 || num_slots == 0) throw std::invalid_argument("time_to_slot needs delta > 0 and N > 0");
  const int128 k = floor_div(t, delta);
  const int128 m = k % num_slots;
  return static_cast<std::uint32_t>(m < 0 ? m + num_slots : m);
}

std::uint32_t time_to_slot(PreciseNs t, PreciseNs delta, std::uint32_t num_slots) {
  if (delta.raw() <= 0 || num_slots == 0) throw std::invalid_argument("time_to_slot needs delta > 0 and N > 0");
  const int128 k = floor_div(t.raw(), delta.raw());
  const int128 m = k % num_slots;
  return static_cast<std::uint32_t>(m < 0 ? m + num_slots : m);
}

const char* to_string(MergeAction a) {
  switch (a) {
    case MergeAction::None: return "none";
    case MergeAction::SetTxToRx: return "set_tx_to_rx";
    case MergeAction::SetRxToTx: return "set_rx_to_tx";
  }
  return "?";
}

MergeResult merge(DualClock& clocks) {
  if (clocks.tau < 0) throw std::invalid_argument("tau must be non-negative");
  const PreciseNs tx = clocks.tx.now_precise();
  const PreciseNs rx = clocks.rx.now_precise();
  const PreciseNs tau = PreciseNs::from_ns(clocks.tau);
  const PreciseNs diff = tx > rx ? tx - rx : rx - tx;
  if (diff > tau * std::int64_t{2}) {
    if (tx < rx) {
      clocks.tx.set_time(rx);
      return {rx, MergeAction::SetTxToRx};
    }
    clocks.rx.set_time(tx);
    return {tx, MergeAction::SetRxToTx};
  }
  const PreciseNs hi = tx > rx ? tx : rx;
  const PreciseNs lo = tx > rx ? rx : tx;
  const PreciseNs sum = hi + lo + tau;
  return {PreciseNs::from_raw(floor_div(sum.raw(), 2)), MergeAction::None};
}

}  // namespace slotnet
