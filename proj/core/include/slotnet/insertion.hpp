#pragma once

#include <cstdint>
#include <optional>

#include "slotnet/ephc.hpp"
#include "slotnet/expected.hpp"
#include "slotnet/ring.hpp"

namespace slotnet {

struct OutboundPacket {
  FlowId flow_id = 0;
  ClassId traffic_class = kBestEffortClass;
  std::uint32_t payload_len = 0;
  std::optional<Nanos> scheduled_time;  // absent for best-effort traffic
  std::uint64_t seq = 0;
};

enum class InsertMode { Strict, Relaxed };

enum class InsertError { NotPlaceholder, OutOfWindow, OwnershipViolation, PayloadTooLarge, NoSlotAvailable };

const char* to_string(InsertMode m);
const char* to_string(InsertError e);

/// Counter of the armed descriptor, or why nothing was armed.
using InsertResult = Expected<std::uint64_t, InsertError>;

/// Ring counter whose transmission slot contains `t` on `clock`.
std::optional<std::uint64_t> target_counter(const EphcClock& clock, Nanos t);

/// Arm the slot matching the packet's scheduled time.
///
/// Strict mode accepts only the exact target and reports the first failing
/// check (placeholder, window, ownership). Relaxed mode falls back to the
/// earliest owned placeholder at or after the target inside the window.
/// Throws std::invalid_argument when the packet carries no scheduled time.
InsertResult try_insert(DmaRing& ring, const OutboundPacket& pkt, const EphcClock& clock, InsertMode mode);

/// Arm the earliest placeholder in the window owned by the packet's class.
InsertResult insert_best_effort(DmaRing& ring, const OutboundPacket& pkt);

}  // namespace slotnet
