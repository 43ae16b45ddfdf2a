#include <gtest/gtest.h>

#include <vector>

#include "slotnet/insertion.hpp"
#include "slotnet/random.hpp"

using namespace slotnet;

namespace {

constexpr Nanos kSlot = 12'000;  // 1500 B at 1 Gbps

RingConfig small_ring(std::uint32_t n = 12, std::uint32_t batch = 5) {
  RingConfig c;
  c.num_slots = n;
  c.batch_size = batch;
  c.slot_size = 1500;
  return c;
}

OutboundPacket rt(ClassId cls, std::uint64_t counter, std::uint32_t len = 64) {
  OutboundPacket p;
  p.flow_id = 1;
  p.traffic_class = cls;
  p.payload_len = len;
  p.scheduled_time = static_cast<Nanos>(counter) * kSlot;
  return p;
}

OutboundPacket be(std::uint32_t len = 1000) {
  OutboundPacket p;
  p.flow_id = 2;
  p.payload_len = len;
  return p;
}

// Ring with consumer at 2 and the clock counting transmitted slots.
struct Fixture {
  DmaRing ring;
  EphcClock clock{PreciseNs::from_ns(kSlot)};
  explicit Fixture(std::vector<ClassId> owners, std::uint32_t n = 12, std::uint32_t batch = 5)
      : ring(small_ring(n, batch), owners) {
    ring.nic_consume(2);
    clock.tick(2);
  }
};

}  // namespace

TEST(TryInsert, OnTimeOwnedPlaceholderSucceeds) {
  Fixture f(std::vector<ClassId>(12, 1));
  const auto r = try_insert(f.ring, rt(1, 8), f.clock, InsertMode::Strict);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, 8u);
  EXPECT_EQ(f.ring.at(8).state, DescriptorState::Armed);
  EXPECT_TRUE(f.ring.at(8).crc_valid);
  EXPECT_EQ(f.ring.at(8).payload_len, 64u);
}

TEST(TryInsert, TooLateIsOutOfWindow) {
  Fixture f(std::vector<ClassId>(12, 1));
  const auto r = try_insert(f.ring, rt(1, 3), f.clock, InsertMode::Strict);
  ASSERT_FALSE(r.has_value());
  EXPECT_EQ(r.error(), InsertError::OutOfWindow);
}

TEST(TryInsert, TooEarlyIsOutOfWindow) {
  Fixture f(std::vector<ClassId>(12, 1));
  const auto r = try_insert(f.ring, rt(1, 30), f.clock, InsertMode::Strict);
  ASSERT_FALSE(r.has_value());
  EXPECT_EQ(r.error(), InsertError::OutOfWindow);
}

TEST(TryInsert, ForeignSlotIsOwnershipViolation) {
  std::vector<ClassId> owners(12, 1);
  owners[9] = 2;
  Fixture f(owners);
  const auto strict = try_insert(f.ring, rt(1, 9), f.clock, InsertMode::Strict);
  ASSERT_FALSE(strict.has_value());
  EXPECT_EQ(strict.error(), InsertError::OwnershipViolation);

  const auto relaxed = try_insert(f.ring, rt(1, 9), f.clock, InsertMode::Relaxed);
  ASSERT_TRUE(relaxed.has_value());
  EXPECT_EQ(*relaxed, 10u);
}

TEST(TryInsert, RelaxedExhaustionReportsNoSlot) {
  std::vector<ClassId> owners(12, 2);
  owners[3] = 1;  // only owned slot is behind the window
  Fixture f(owners);
  const auto r = try_insert(f.ring, rt(1, 9), f.clock, InsertMode::Relaxed);
  ASSERT_FALSE(r.has_value());
  EXPECT_EQ(r.error(), InsertError::NoSlotAvailable);
}

TEST(TryInsert, ArmedSlotIsNotPlaceholder) {
  Fixture f(std::vector<ClassId>(12, 1));
  ASSERT_TRUE(try_insert(f.ring, rt(1, 8), f.clock, InsertMode::Strict).has_value());
  const auto r = try_insert(f.ring, rt(1, 8), f.clock, InsertMode::Strict);
  EXPECT_EQ(r.error(), InsertError::NotPlaceholder);
  const auto relaxed = try_insert(f.ring, rt(1, 8), f.clock, InsertMode::Relaxed);
  EXPECT_EQ(*relaxed, 9u);
}

TEST(TryInsert, PayloadLimits) {
  Fixture f(std::vector<ClassId>(12, 1));
  EXPECT_EQ(try_insert(f.ring, rt(1, 8, 1501), f.clock, InsertMode::Strict).error(), InsertError::PayloadTooLarge);
  EXPECT_EQ(try_insert(f.ring, rt(1, 8, 0), f.clock, InsertMode::Relaxed).error(), InsertError::PayloadTooLarge);
  OutboundPacket unscheduled = rt(1, 8);
  unscheduled.scheduled_time.reset();
  EXPECT_THROW(try_insert(f.ring, unscheduled, f.clock, InsertMode::Strict), std::invalid_argument);
}

TEST(InsertBestEffort, PicksLowestCounterInWindow) {
  Fixture f(std::vector<ClassId>(12, kBestEffortClass));
  EXPECT_EQ(*insert_best_effort(f.ring, be()), 7u);
  EXPECT_EQ(*insert_best_effort(f.ring, be()), 8u);
}

TEST(InsertBestEffort, FullWindowHasNoSlot) {
  Fixture f(std::vector<ClassId>(12, kBestEffortClass));
  // Counters 12 and 13 reuse descriptors the NIC consumed but the driver has
  // not reclaimed yet.
  for (int i = 0; i < 5; ++i) ASSERT_TRUE(insert_best_effort(f.ring, be()).has_value());
  EXPECT_EQ(insert_best_effort(f.ring, be()).error(), InsertError::NoSlotAvailable);
  f.ring.poll_cycle();
  EXPECT_EQ(*insert_best_effort(f.ring, be()), 12u);
  EXPECT_EQ(*insert_best_effort(f.ring, be()), 13u);
  EXPECT_EQ(insert_best_effort(f.ring, be()).error(), InsertError::NoSlotAvailable);
}

TEST(InsertBestEffort, SkipsRealTimeSlots) {
  std::vector<ClassId> owners(12, kBestEffortClass);
  owners[7] = 1;
  owners[8] = 1;
  Fixture f(owners);
  EXPECT_EQ(*insert_best_effort(f.ring, be()), 9u);
}

// Brute-force census of the window decides what relaxed mode must pick.
TEST(InsertionProperty, RelaxedMatchesWindowScan) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    const auto n = static_cast<std::uint32_t>(rng.between(2, 24));
    const auto batch = static_cast<std::uint32_t>(rng.between(1, n));
    std::vector<ClassId> owners(n);
    for (auto& o : owners) o = static_cast<ClassId>(rng.between(0, 2));
    DmaRing ring(small_ring(n, batch), owners);
    EphcClock clock(PreciseNs::from_ns(kSlot));
    for (int step = 0; step < 400; ++step) {
      ring.poll_cycle();
      const Window w = ring.insertion_window();
      const auto cls = static_cast<ClassId>(rng.between(1, 2));
      const std::uint64_t target = ring.consumer_index() + rng.between(0, 2 * n);
      std::optional<std::uint64_t> expect;
      for (std::uint64_t c = std::max(target, w.lo); c < w.hi && !expect; ++c)
        if (ring.at(c).state == DescriptorState::Placeholder && ring.owner(c) == cls) expect = c;
      const auto r = try_insert(ring, rt(cls, target), clock, InsertMode::Relaxed);
      if (expect) {
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(*r, *expect);
      } else {
        EXPECT_EQ(r.error(), InsertError::NoSlotAvailable);
      }
      if (ring.outstanding() > 0 && rng.chance(0.7)) {
        ring.nic_consume(1);
        clock.tick();
      }
    }
  }
}

TEST(InsertionProperty, NeverArmsOutsideWindowOrForeignSlot) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed * 7);
    const auto n = static_cast<std::uint32_t>(rng.between(1, 32));
    const auto batch = static_cast<std::uint32_t>(rng.between(1, n));
    std::vector<ClassId> owners(n);
    for (auto& o : owners) o = static_cast<ClassId>(rng.between(0, 3));
    DmaRing ring(small_ring(n, batch), owners);
    EphcClock clock(PreciseNs::from_ns(kSlot));
    for (int step = 0; step < 500; ++step) {
      ring.poll_cycle();
      const Window w = ring.insertion_window();
      const auto mode = rng.chance(0.5) ? InsertMode::Strict : InsertMode::Relaxed;
      const auto cls = static_cast<ClassId>(rng.between(0, 3));
      const std::uint64_t target = ring.consumer_index() + rng.between(0, 2 * n);
      const auto r = cls == kBestEffortClass ? insert_best_effort(ring, be())
                                             : try_insert(ring, rt(cls, target), clock, mode);
      if (r.has_value()) {
        EXPECT_TRUE(w.contains(*r));
        EXPECT_EQ(ring.owner(*r), cls);
        if (cls != kBestEffortClass && mode == InsertMode::Strict) {
          EXPECT_EQ(*r, target);
          EXPECT_EQ(time_to_slot(*rt(cls, target).scheduled_time, kSlot, n), ring.position(*r));
        }
      }
      if (ring.outstanding() > 0) {
        ring.nic_consume(1);
        clock.tick();
      }
    }
  }
}
