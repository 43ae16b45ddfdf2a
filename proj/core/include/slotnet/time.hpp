#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace slotnet {

/// Absolute or relative time in integer nanoseconds.
using Nanos = std::int64_t;

__extension__ typedef __int128 int128;

/// Floor division for signed 128-bit operands, divisor must be positive.
constexpr int128 floor_div(int128 a, int128 b) {
  int128 q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

/// Division rounding to nearest, ties away from zero. Divisor must be positive.
constexpr int128 round_div(int128 a, int128 b) {
  if (a >= 0) return (2 * a + b) / (2 * b);
  return -((-2 * a + b) / (2 * b));
}

/// Exact ratio of two 64-bit integers, kept normalized (den > 0, gcd = 1).
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Nearest rational with denominator `den`.
  static Rational from_double(double v, std::int64_t den = 1'000'000'000'000'000);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<int128>(a.num_) * b.den_ <=> static_cast<int128>(b.num_) * a.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Fixed-point duration with a resolution of 1e-12 ns.
///
/// Clock periods live here instead of in a Rational so that repeated rate
/// corrections never grow the denominator.
class PreciseNs {
 public:
  static constexpr int128 kUnitsPerNs = 1'000'000'000'000;

  constexpr PreciseNs() = default;

  static constexpr PreciseNs from_raw(int128 raw) { return PreciseNs(raw); }
  static constexpr PreciseNs from_ns(Nanos ns) { return PreciseNs(static_cast<int128>(ns) * kUnitsPerNs); }
  /// num/den nanoseconds, rounded to the nearest unit.
  static PreciseNs from_fraction(int128 num, int128 den);
  static PreciseNs from_double(double ns);

  constexpr int128 raw() const { return raw_; }
  Nanos round() const { return static_cast<Nanos>(round_div(raw_, kUnitsPerNs)); }
  Nanos floor() const { return static_cast<Nanos>(floor_div(raw_, kUnitsPerNs)); }
  double to_double() const;
  std::string to_string() const;

  /// this * ratio, rounded to the nearest unit.
  PreciseNs scaled(const Rational& ratio) const;

  constexpr PreciseNs operator+(PreciseNs o) const { return PreciseNs(raw_ + o.raw_); }
  constexpr PreciseNs operator-(PreciseNs o) const { return PreciseNs(raw_ - o.raw_); }
  constexpr PreciseNs operator-() const { return PreciseNs(-raw_); }
  constexpr PreciseNs operator*(std::int64_t k) const { return PreciseNs(raw_ * k); }
  constexpr PreciseNs operator*(std::uint64_t k) const { return PreciseNs(raw_ * static_cast<int128>(k)); }
  PreciseNs& operator+=(PreciseNs o) { raw_ += o.raw_; return *this; }
  PreciseNs& operator-=(PreciseNs o) { raw_ -= o.raw_; return *this; }

  friend constexpr bool operator==(PreciseNs, PreciseNs) = default;
  friend constexpr auto operator<=>(PreciseNs a, PreciseNs b) { return a.raw_ <=> b.raw_; }

 private:
  constexpr explicit PreciseNs(int128 raw) : raw_(raw) {}
  int128 raw_ = 0;
};

}  // namespace slotnet
