#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <map>
#include <vector>

#include "slotnet/random.hpp"
#include "slotnet/traffic.hpp"

using namespace slotnet;

namespace {

constexpr Nanos kSlot = 12'000;

OutboundPacket rt_at(Nanos t, std::uint64_t seq = 0, ClassId cls = 1) {
  OutboundPacket p;
  p.flow_id = 1;
  p.traffic_class = cls;
  p.payload_len = 64;
  p.scheduled_time = t;
  p.seq = seq;
  return p;
}

OutboundPacket be_pkt(std::uint64_t seq, std::uint32_t len = 1000) {
  OutboundPacket p;
  p.flow_id = 2;
  p.payload_len = len;
  p.seq = seq;
  return p;
}

RingConfig ring_cfg(std::uint32_t n, std::uint32_t batch) {
  RingConfig c;
  c.num_slots = n;
  c.batch_size = batch;
  return c;
}

}  // namespace

TEST(RtQueue, DequeuesEarliestFirst) {
  RtQueue q;
  for (Nanos t : {30, 10, 20}) q.push(rt_at(t));
  std::vector<Nanos> out;
  while (!q.empty()) out.push_back(*q.pop().scheduled_time);
  EXPECT_EQ(out, (std::vector<Nanos>{10, 20, 30}));
}

TEST(RtQueue, SingleElementIsRoot) {
  RtQueue q;
  q.push(rt_at(42, 7));
  EXPECT_EQ(q.top().seq, 7u);
  EXPECT_THROW(RtQueue().top(), std::out_of_range);
}

TEST(RtQueue, TiesKeepArrivalOrder) {
  RtQueue q;
  for (std::uint64_t s = 0; s < 5; ++s) q.push(rt_at(100, s));
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_EQ(q.pop().seq, s);
}

TEST(RtQueue, MatchesSortOracle) {
  Rng rng(1);
  RtQueue q(20'000);
  std::vector<Nanos> times;
  for (int i = 0; i < 10'000; ++i) {
    times.push_back(static_cast<Nanos>(rng.between(0, 1'000'000'000)));
    q.push(rt_at(times.back()));
  }
  std::sort(times.begin(), times.end());
  for (Nanos t : times) EXPECT_EQ(*q.pop().scheduled_time, t);
}

TEST(RtQueue, OverflowDropsNewest) {
  RtQueue q(2);
  EXPECT_EQ(q.push(rt_at(5)), EnqueueResult::Ok);
  EXPECT_EQ(q.push(rt_at(6)), EnqueueResult::Ok);
  EXPECT_EQ(q.push(rt_at(1)), EnqueueResult::QueueFull);
  EXPECT_EQ(q.overflow_drops(), 1u);
  EXPECT_EQ(*q.top().scheduled_time, 5);
  OutboundPacket unscheduled = rt_at(0);
  unscheduled.scheduled_time.reset();
  EXPECT_THROW(q.push(unscheduled), std::invalid_argument);
}

TEST(BeQueue, Fifo) {
  BeQueue q;
  for (std::uint64_t s : {1, 2, 3}) q.push(be_pkt(s));
  EXPECT_EQ(q.pop().seq, 1u);
  EXPECT_EQ(q.pop().seq, 2u);
  EXPECT_EQ(q.pop().seq, 3u);
}

TEST(BeQueue, FullQueueCountsDrop) {
  BeQueue q(1);
  q.push(be_pkt(1));
  EXPECT_EQ(q.push(be_pkt(2)), EnqueueResult::QueueFull);
  EXPECT_EQ(q.overflow_drops(), 1u);
  EXPECT_EQ(q.size(), 1u);
}

TEST(BeQueue, InterleavedOpsMatchReferenceQueue) {
  Rng rng(2);
  BeQueue q(64);
  std::deque<std::uint64_t> ref;
  std::uint64_t seq = 0;
  for (int i = 0; i < 20'000; ++i) {
    if (rng.chance(0.55)) {
      const auto r = q.push(be_pkt(seq));
      if (ref.size() < 64) {
        ref.push_back(seq);
        EXPECT_EQ(r, EnqueueResult::Ok);
      } else {
        EXPECT_EQ(r, EnqueueResult::QueueFull);
      }
      ++seq;
    } else if (!ref.empty()) {
      EXPECT_EQ(q.pop().seq, ref.front());
      ref.pop_front();
    }
    ASSERT_EQ(q.size(), ref.size());
  }
}

TEST(Service, RootAtWindowLowEdgeIsInserted) {
  DmaRing ring(ring_cfg(12, 3), std::vector<ClassId>(12, 1));
  EphcClock clock(PreciseNs::from_ns(kSlot));
  RtQueue rt;
  BeQueue be;
  rt.push(rt_at(static_cast<Nanos>(ring.insertion_window().lo) * kSlot));
  const auto rep = service(rt, be, ring, clock, ServicePolicy{}, InsertMode::Strict);
  EXPECT_EQ(rep.rt_inserted, 1u);
  EXPECT_TRUE(rt.empty());
}

TEST(Service, RootTwoRevolutionsAheadIsDeferred) {
  DmaRing ring(ring_cfg(12, 3), std::vector<ClassId>(12, 1));
  EphcClock clock(PreciseNs::from_ns(kSlot));
  RtQueue rt;
  BeQueue be;
  rt.push(rt_at(24 * kSlot + 5 * kSlot));
  const auto rep = service(rt, be, ring, clock, ServicePolicy{1'000'000'000}, InsertMode::Strict);
  EXPECT_EQ(rep.rt_deferred, 1u);
  EXPECT_EQ(rep.rt_inserted, 0u);
  EXPECT_EQ(rt.size(), 1u);
}

TEST(Service, BeBacklogFillsOnlyBePlaceholders) {
  // Window [3, 12): three BE-owned slots inside it.
  std::vector<ClassId> owners(12, 1);
  owners[4] = owners[6] = owners[10] = kBestEffortClass;
  DmaRing ring(ring_cfg(12, 3), owners);
  EphcClock clock(PreciseNs::from_ns(kSlot));
  RtQueue rt;
  BeQueue be;
  for (std::uint64_t s = 0; s < 5; ++s) be.push(be_pkt(s));
  const auto rep = service(rt, be, ring, clock, ServicePolicy{}, InsertMode::Strict);
  EXPECT_EQ(rep.be_inserted, 3u);
  EXPECT_EQ(be.size(), 2u);
  EXPECT_EQ(be.front().seq, 3u);
}

TEST(Service, LateStrictPacketIsDroppedAndCounted) {
  DmaRing ring(ring_cfg(12, 3), std::vector<ClassId>(12, 1));
  EphcClock clock(PreciseNs::from_ns(kSlot));
  for (int i = 0; i < 10; ++i) {
    ring.poll_cycle();
    ring.nic_consume(1);
    clock.tick();
  }
  RtQueue rt;
  BeQueue be;
  rt.push(rt_at(2 * kSlot, 9));
  const auto rep = service(rt, be, ring, clock, ServicePolicy{}, InsertMode::Strict);
  ASSERT_EQ(rep.rt_drops.size(), 1u);
  EXPECT_EQ(rep.rt_drops[0].seq, 9u);
  EXPECT_EQ(rep.rt_drops[0].cause, InsertError::OutOfWindow);
}

// EDF order, release lead, conservation and BE isolation over random runs.
TEST(ServiceProperty, InvariantsHoldOnRandomRuns) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto n = static_cast<std::uint32_t>(rng.between(4, 32));
    const auto batch = static_cast<std::uint32_t>(rng.between(1, n / 2));
    std::vector<ClassId> owners(n);
    for (auto& o : owners) o = rng.chance(0.5) ? ClassId{1} : kBestEffortClass;
    DmaRing ring(ring_cfg(n, batch), owners);
    EphcClock clock(PreciseNs::from_ns(kSlot));
    const ServicePolicy policy{static_cast<Nanos>(rng.between(0, 3 * n)) * kSlot};
    const auto mode = rng.chance(0.5) ? InsertMode::Strict : InsertMode::Relaxed;
    RtQueue rt;
    BeQueue be(16);

    std::map<std::uint64_t, Nanos> pending;
    std::uint64_t rt_enq = 0, rt_done = 0, be_enq = 0, be_done = 0, seq = 0;
    for (int step = 0; step < 2000; ++step) {
      for (int k = static_cast<int>(rng.between(0, 2)); k > 0; --k) {
        const Nanos t = clock.now() + static_cast<Nanos>(rng.between(0, 4 * n)) * kSlot;
        if (rt.push(rt_at(t, seq)) == EnqueueResult::Ok) {
          pending[seq] = t;
          ++rt_enq;
        }
        ++seq;
      }
      if (be.push(be_pkt(seq++)) == EnqueueResult::Ok) ++be_enq;

      ring.poll_cycle();
      const auto rep = service(rt, be, ring, clock, policy, mode);

      std::vector<Nanos> popped;
      for (const auto& d : rep.rt_drops) {
        popped.push_back(pending.at(d.seq));
        pending.erase(d.seq);
      }
      for (const auto& d : ring.descriptors()) {
        if (d.state != DescriptorState::Armed) continue;
        if (d.flow_id == 1u && pending.count(d.seq)) {
          popped.push_back(pending.at(d.seq));
          pending.erase(d.seq);
        }
        if (d.flow_id == 2u) EXPECT_EQ(d.owner_class, kBestEffortClass);
      }
      for (Nanos t : popped) {
        EXPECT_GE(clock.now(), t - policy.release_delta);
        if (!rt.empty()) EXPECT_LE(t, *rt.top().scheduled_time);
      }
      rt_done += rep.rt_inserted + rep.rt_drops.size();
      be_done += rep.be_inserted + rep.be_drops.size();
      ASSERT_EQ(rt_enq, rt_done + rt.size());
      ASSERT_EQ(be_enq, be_done + be.size());
      ASSERT_EQ(rep.rt_inserted + rep.rt_drops.size(), popped.size());

      ring.nic_consume(1);
      clock.tick();
    }
  }
}
