#include "slotnet/insertion.hpp"

#include <algorithm>
#include <stdexcept>

namespace slotnet {

namespace {

bool is_free(const Descriptor& d) { return d.state == DescriptorState::Placeholder && !d.crc_valid; }

ArmRequest request_for(const OutboundPacket& pkt) {
  return ArmRequest{pkt.payload_len, pkt.scheduled_time, pkt.flow_id, pkt.seq};
}

std::optional<std::uint64_t> first_owned_free(const DmaRing& ring, std::uint64_t from, std::uint64_t to,
                                              ClassId cls) {
  for (std::uint64_t c = from; c < to; ++c) {
    const Descriptor& d = ring.at(c);
    if (is_free(d) && d.owner_class == cls) return c;
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(InsertMode m) { return m == InsertMode::Strict ? "strict" : "relaxed"; }

const char* to_string(InsertError e) {
  switch (e) {
    case InsertError::NotPlaceholder: return "not_placeholder";
    case InsertError::OutOfWindow: return "out_of_window";
    case InsertError::OwnershipViolation: return "ownership_violation";
    case InsertError::PayloadTooLarge: return "payload_too_large";
    case InsertError::NoSlotAvailable: return "no_slot_available";
  }
  return "?";
}

std::optional<std::uint64_t> target_counter(const EphcClock& clock, Nanos t) { return clock.count_at(t); }

InsertResult try_insert(DmaRing& ring, const OutboundPacket& pkt, const EphcClock& clock, InsertMode mode) {
  if (!pkt.scheduled_time) throw std::invalid_argument("scheduled insertion needs a scheduled_time");
  if (pkt.payload_len == 0 || pkt.payload_len > ring.config().slot_size) return unexpected(InsertError::PayloadTooLarge);

  const Window w = ring.insertion_window();
  const std::optional<std::uint64_t> target = target_counter(clock, *pkt.scheduled_time);

  std::optional<InsertError> failure;
  if (!target) {
    failure = InsertError::OutOfWindow;
  } else if (!is_free(ring.at(*target))) {
    failure = InsertError::NotPlaceholder;
  } else if (!w.contains(*target)) {
    failure = InsertError::OutOfWindow;
  } else if (ring.owner(*target) != pkt.traffic_class) {
    failure = InsertError::OwnershipViolation;
  }

  if (!failure) {
    ring.arm(*target, request_for(pkt));
    return *target;
  }
  if (mode == InsertMode::Strict) return unexpected(*failure);

  const std::uint64_t from = std::max(target.value_or(w.lo), w.lo);
  if (auto c = first_owned_free(ring, from, w.hi, pkt.traffic_class)) {
    ring.arm(*c, request_for(pkt));
    return *c;
  }
  return unexpected(InsertError::NoSlotAvailable);
}

InsertResult insert_best_effort(DmaRing& ring, const OutboundPacket& pkt) {
  if (pkt.payload_len == 0 || pkt.payload_len > ring.config().slot_size) return unexpected(InsertError::PayloadTooLarge);
  const Window w = ring.insertion_window();
  if (auto c = first_owned_free(ring, w.lo, w.hi, pkt.traffic_class)) {
    ring.arm(*c, request_for(pkt));
    return *c;
  }
  return unexpected(InsertError::NoSlotAvailable);
}

}  // namespace slotnet
