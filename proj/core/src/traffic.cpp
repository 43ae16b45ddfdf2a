#include "slotnet/traffic.hpp"

#include <algorithm>
#include <stdexcept>

namespace slotnet {

bool RtQueue::later(const Entry& a, const Entry& b) {
  if (*a.pkt.scheduled_time != *b.pkt.scheduled_time) return *a.pkt.scheduled_time > *b.pkt.scheduled_time;
  return a.arrival > b.arrival;
}

EnqueueResult RtQueue::push(const OutboundPacket& pkt) {
  if (!pkt.scheduled_time) throw std::invalid_argument("RT packets need a scheduled_time");
  if (heap_.size() >= capacity_) {
    ++overflow_;
    return EnqueueResult::QueueFull;
  }
  heap_.push_back(Entry{pkt, arrivals_++});
  std::push_heap(heap_.begin(), heap_.end(), later);
  return EnqueueResult::Ok;
}

const OutboundPacket& RtQueue::top() const {
  if (heap_.empty()) throw std::out_of_range("RtQueue is empty");
  return heap_.front().pkt;
}

OutboundPacket RtQueue::pop() {
  if (heap_.empty()) throw std::out_of_range("RtQueue is empty");
  std::pop_heap(heap_.begin(), heap_.end(), later);
  OutboundPacket pkt = std::move(heap_.back().pkt);
  heap_.pop_back();
  return pkt;
}

EnqueueResult BeQueue::push(const OutboundPacket& pkt) {
  if (fifo_.size() >= capacity_) {
    ++overflow_;
    return EnqueueResult::QueueFull;
  }
  fifo_.push_back(pkt);
  return EnqueueResult::Ok;
}

const OutboundPacket& BeQueue::front() const {
  if (fifo_.empty()) throw std::out_of_range("BeQueue is empty");
  return fifo_.front();
}

OutboundPacket BeQueue::pop() {
  if (fifo_.empty()) throw std::out_of_range("BeQueue is empty");
  OutboundPacket pkt = std::move(fifo_.front());
  fifo_.pop_front();
  return pkt;
}

ServiceReport service(RtQueue& rt, BeQueue& be, DmaRing& ring, const EphcClock& clock, const ServicePolicy& policy,
                      InsertMode mode) {
  if (policy.release_delta < 0) throw std::invalid_argument("release_delta must be non-negative");
  ServiceReport report;
  const Nanos now = clock.now();

  while (!rt.empty()) {
    const OutboundPacket& root = rt.top();
    const Nanos sched = *root.scheduled_time;
    const auto target = target_counter(clock, sched);
    const bool released = now >= sched - policy.release_delta;
    const bool reachable = !target || *target < ring.insertion_window().hi;
    if (!released || !reachable) {
      report.rt_deferred = 1;
      break;
    }
    const OutboundPacket pkt = rt.pop();
    const InsertResult res = try_insert(ring, pkt, clock, mode);
    if (res) {
      ++report.rt_inserted;
    } else {
      report.rt_drops.push_back(PacketOutcome{pkt.flow_id, pkt.seq, res.error()});
    }
  }

  while (!be.empty()) {
    const InsertResult res = insert_best_effort(ring, be.front());
    if (res) {
      be.pop();
      ++report.be_inserted;
      continue;
    }
    if (res.error() == InsertError::NoSlotAvailable) break;
    const OutboundPacket pkt = be.pop();
    report.be_drops.push_back(PacketOutcome{pkt.flow_id, pkt.seq, res.error()});
  }
  return report;
}

}  // namespace slotnet
