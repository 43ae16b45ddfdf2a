#include <gtest/gtest.h>

#include "slotnet/ephc.hpp"
#include "slotnet/random.hpp"

using namespace slotnet;

TEST(EphcClock, NowIsCountTimesPeriodPlusOffset) {
  EphcClock a(PreciseNs::from_ns(777), PreciseNs::from_ns(5));
  EXPECT_EQ(a.now(), 5);

  EphcClock b(PreciseNs::from_ns(12'000));
  b.tick(3);
  EXPECT_EQ(b.now(), 36'000);

  EphcClock c(PreciseNs::from_ns(2'400), PreciseNs::from_ns(100));
  c.tick(10);
  EXPECT_EQ(c.now(), 24'100);
}

TEST(EphcClock, ForRingUsesSlotWireTime) {
  RingConfig cfg;
  cfg.slot_size = 1500;
  EXPECT_EQ(EphcClock::for_ring(cfg).cycle_period(), PreciseNs::from_ns(12'000));
}

TEST(EphcClock, TickAdvancesCount) {
  EphcClock c(PreciseNs::from_ns(2'400));
  c.tick(1);
  EXPECT_EQ(c.cycle_count(), 1u);
  c.tick(0);
  EXPECT_EQ(c.cycle_count(), 1u);
}

TEST(EphcClock, MillionTicksMatchClosedForm) {
  EphcClock iterative(PreciseNs::from_ns(2'400));
  for (int i = 0; i < 1'000'000; ++i) iterative.tick();
  EXPECT_EQ(iterative.now(), 2'400'000'000);
  EphcClock bulk(PreciseNs::from_ns(2'400));
  bulk.tick(1'000'000);
  EXPECT_EQ(bulk.now_precise(), iterative.now_precise());
}

TEST(EphcClock, OffsetAdjustmentAndSetTime) {
  EphcClock c(PreciseNs::from_ns(10), PreciseNs::from_ns(5));
  c.tick(4);
  const Nanos before = c.now();
  c.adjust_offset(Nanos{-5});
  EXPECT_EQ(c.now(), before - 5);
  EXPECT_EQ(c.cycle_count(), 4u);
  c.set_time(Nanos{123'456});
  EXPECT_EQ(c.now(), 123'456);
  EXPECT_EQ(c.cycle_count(), 4u);
}

TEST(EphcClock, AdjustRateIsExactAndContinuous) {
  EphcClock c(PreciseNs::from_ns(2'400));
  c.tick(1'000);
  const PreciseNs before = c.now_precise();
  c.adjust_rate(Rational(1));
  EXPECT_EQ(c.now_precise(), before);
  EXPECT_EQ(c.cycle_period(), PreciseNs::from_ns(2'400));

  c.adjust_rate(Rational(1'000'001, 1'000'000));
  EXPECT_EQ(c.cycle_period().to_string(), "2400.0024");
  EXPECT_EQ(c.now_precise(), before);
  c.tick();
  EXPECT_EQ(c.now_precise() - before, c.cycle_period());
  EXPECT_THROW(c.adjust_rate(Rational(0)), std::invalid_argument);
}

TEST(EphcClock, CountAtInvertsTimeAt) {
  EphcClock c(PreciseNs::from_fraction(10'001, 1), PreciseNs::from_ns(-3'000));
  for (std::uint64_t k : {0ull, 1ull, 17ull, 100'000ull}) {
    const Nanos t = c.time_at(k).round();
    EXPECT_EQ(c.count_at(t + 1), k);
  }
  EphcClock late(PreciseNs::from_ns(10), PreciseNs::from_ns(100));
  EXPECT_FALSE(late.count_at(99).has_value());
}

TEST(EphcProperty, CountUntouchedByAdjustments) {
  Rng rng(5);
  EphcClock c(PreciseNs::from_ns(12'000));
  std::uint64_t ticks = 0;
  Nanos last = c.now();
  for (int i = 0; i < 10'000; ++i) {
    switch (rng.between(0, 3)) {
      case 0: {
        const auto n = rng.between(0, 50);
        c.tick(n);
        ticks += n;
        EXPECT_GE(c.now(), last);
        break;
      }
      case 1: c.adjust_offset(static_cast<Nanos>(rng.between(0, 2'000)) - 1'000); break;
      case 2: c.set_time(static_cast<Nanos>(rng.between(0, 1'000'000'000))); break;
      case 3: c.adjust_rate(Rational(static_cast<std::int64_t>(rng.between(999'990, 1'000'010)), 1'000'000)); break;
    }
    ASSERT_EQ(c.cycle_count(), ticks);
    last = c.now();
  }
}

TEST(TimeToSlot, Examples) {
  EXPECT_EQ(time_to_slot(Nanos{0}, 10'000, 32), 0u);
  EXPECT_EQ(time_to_slot(Nanos{1'230'000}, 10'000, 32), 27u);
  EXPECT_EQ(time_to_slot(Nanos{320'000}, 10'000, 32), 0u);
  EXPECT_EQ(time_to_slot(Nanos{319'999}, 10'000, 32), 31u);
  EXPECT_EQ(time_to_slot(PreciseNs::from_ns(25), PreciseNs::from_fraction(25, 2), 4), 2u);
}

namespace {

DualClock dual(Nanos tx, Nanos rx, Nanos tau) {
  DualClock d{EphcClock(PreciseNs::from_ns(tau)), EphcClock(PreciseNs::from_ns(tau)), tau};
  d.tx.set_time(tx);
  d.rx.set_time(rx);
  return d;
}

}  // namespace

TEST(Merge, Examples) {
  auto d = dual(100, 100, 10);
  auto r = merge(d);
  EXPECT_EQ(r.merged_ns(), 105);
  EXPECT_EQ(r.action, MergeAction::None);

  d = dual(110, 100, 10);
  EXPECT_EQ(merge(d).merged_ns(), 110);

  d = dual(100, 200, 10);
  r = merge(d);
  EXPECT_EQ(r.merged_ns(), 200);
  EXPECT_EQ(r.action, MergeAction::SetTxToRx);
  EXPECT_EQ(d.tx.now(), 200);

  d = dual(300, 200, 10);
  r = merge(d);
  EXPECT_EQ(r.action, MergeAction::SetRxToTx);
  EXPECT_EQ(d.rx.now(), 300);
}

TEST(Merge, DivergenceOfExactlyTwoTauIsSmall) {
  auto d = dual(120, 100, 10);
  const auto r = merge(d);
  EXPECT_EQ(r.action, MergeAction::None);
  EXPECT_EQ(r.merged_ns(), 115);
}

TEST(MergeProperty, SymmetricAndCountPreserving) {
  Rng rng(9);
  for (int i = 0; i < 5'000; ++i) {
    const Nanos tau = static_cast<Nanos>(rng.between(1, 20'000));
    const Nanos a = static_cast<Nanos>(rng.between(0, 1'000'000));
    const Nanos b = a + static_cast<Nanos>(rng.between(0, 6 * tau)) - 3 * tau;
    auto d1 = dual(a, b, tau);
    auto d2 = dual(b, a, tau);
    d1.tx.tick(3);
    d2.tx.tick(3);
    d1.tx.set_time(a);
    d2.tx.set_time(b);
    const auto r1 = merge(d1);
    const auto r2 = merge(d2);
    EXPECT_EQ(r1.merged, r2.merged);
    if (r1.action == MergeAction::SetTxToRx) EXPECT_EQ(r2.action, MergeAction::SetRxToTx);
    if (r1.action == MergeAction::None) EXPECT_EQ(r2.action, MergeAction::None);
    EXPECT_EQ(d1.tx.cycle_count(), 3u);
    EXPECT_EQ(d1.rx.cycle_count(), 0u);
  }
}
