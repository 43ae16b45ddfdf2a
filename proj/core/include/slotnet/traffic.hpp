#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "slotnet/ephc.hpp"
#include "slotnet/insertion.hpp"
#include "slotnet/ring.hpp"

namespace slotnet {

inline constexpr std::size_t kDefaultQueueCapacity = 4096;

enum class EnqueueResult { Ok, QueueFull };

/// Real-time packets ordered by scheduled time (earliest first). Ties keep
/// arrival order.
class RtQueue {
 public:
  explicit RtQueue(std::size_t capacity = kDefaultQueueCapacity) : capacity_(capacity) {}

  /// Throws std::invalid_argument if the packet has no scheduled time.
  EnqueueResult push(const OutboundPacket& pkt);
  const OutboundPacket& top() const;
  OutboundPacket pop();

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t overflow_drops() const { return overflow_; }

 private:
  struct Entry {
    OutboundPacket pkt;
    std::uint64_t arrival;
  };
  static bool later(const Entry& a, const Entry& b);

  std::vector<Entry> heap_;
  std::size_t capacity_;
  std::uint64_t arrivals_ = 0;
  std::uint64_t overflow_ = 0;
};

class BeQueue {
 public:
  explicit BeQueue(std::size_t capacity = kDefaultQueueCapacity) : capacity_(capacity) {}

  EnqueueResult push(const OutboundPacket& pkt);
  const OutboundPacket& front() const;
  OutboundPacket pop();

  bool empty() const { return fifo_.empty(); }
  std::size_t size() const { return fifo_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t overflow_drops() const { return overflow_; }

 private:
  std::deque<OutboundPacket> fifo_;
  std::size_t capacity_;
  std::uint64_t overflow_ = 0;
};

struct ServicePolicy {
  Nanos release_delta = 50'000;
};

struct PacketOutcome {
  FlowId flow_id = 0;
  std::uint64_t seq = 0;
  InsertError cause = InsertError::NoSlotAvailable;
};

struct ServiceReport {
  std::uint64_t rt_inserted = 0;
  std::uint64_t rt_deferred = 0;  // 1 when the RT root was left queued
  std::uint64_t be_inserted = 0;
  std::vector<PacketOutcome> rt_drops;
  std::vector<PacketOutcome> be_drops;

  std::uint64_t inserted() const { return rt_inserted + be_inserted; }
  std::uint64_t dropped() const { return rt_drops.size() + be_drops.size(); }
};

/// Release queued packets into the ring.
///
/// The RT root is popped once the clock has reached scheduled_time -
/// release_delta and its target slot is not beyond the window's upper edge;
/// otherwise it is deferred and the RT pass stops. BE packets then fill
/// BE-owned placeholders until the window runs out.
ServiceReport service(RtQueue& rt, BeQueue& be, DmaRing& ring, const EphcClock& clock, const ServicePolicy& policy,
                      InsertMode mode);

}  // namespace slotnet
