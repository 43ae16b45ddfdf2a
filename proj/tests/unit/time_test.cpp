#include <gtest/gtest.h>

#include "slotnet/time.hpp"

using namespace slotnet;

TEST(Rational, NormalizesSignAndGcd) {
  const Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(Rational, OrdersByValue) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
}

TEST(PreciseNs, RoundsHalfAwayFromZero) {
  EXPECT_EQ(PreciseNs::from_fraction(3, 2).round(), 2);
  EXPECT_EQ(PreciseNs::from_fraction(-3, 2).round(), -2);
  EXPECT_EQ(PreciseNs::from_fraction(7, 5).round(), 1);
  EXPECT_EQ(PreciseNs::from_fraction(-7, 5).floor(), -2);
}

TEST(PreciseNs, ScaledByPpmIsExact) {
  const PreciseNs p = PreciseNs::from_ns(2400).scaled(Rational(1'000'001, 1'000'000));
  EXPECT_EQ(p.raw(), static_cast<int128>(2'400'002'400'000'000));
  EXPECT_EQ(p.to_string(), "2400.0024");
}

TEST(PreciseNs, DoubleRoundTripNearNanosecond) {
  const PreciseNs p = PreciseNs::from_double(12.5);
  EXPECT_EQ(p, PreciseNs::from_fraction(25, 2));
  EXPECT_DOUBLE_EQ(p.to_double(), 12.5);
}
