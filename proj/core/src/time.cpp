#include "slotnet/time.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slotnet {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / (g == 0 ? 1 : g);
  den_ = den / (g == 0 ? 1 : g);
}

Rational Rational::from_double(double v, std::int64_t den) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite ratio");
  const long double scaled = static_cast<long double>(v) * static_cast<long double>(den);
  if (std::fabs(scaled) > 9.2e18L) throw std::overflow_error("ratio too large for rational approximation");
  return Rational(static_cast<std::int64_t>(std::llroundl(scaled)), den);
}

std::string Rational::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

PreciseNs PreciseNs::from_fraction(int128 num, int128 den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return PreciseNs(round_div(num * kUnitsPerNs, den));
}

PreciseNs PreciseNs::from_double(double ns) {
  if (!std::isfinite(ns)) throw std::invalid_argument("non-finite duration");
  return PreciseNs(static_cast<int128>(std::llroundl(static_cast<long double>(ns) * 1e12L)));
}

double PreciseNs::to_double() const {
  const int128 whole = floor_div(raw_, kUnitsPerNs);
  const int128 frac = raw_ - whole * kUnitsPerNs;
  return static_cast<double>(whole) + static_cast<double>(frac) / 1e12;
}

std::string PreciseNs::to_string() const {
  int128 v = raw_;
  const bool neg = v < 0;
  if (neg) v = -v;
  const auto whole = static_cast<std::uint64_t>(v / kUnitsPerNs);
  auto frac = static_cast<std::uint64_t>(v % kUnitsPerNs);
  std::string out = (neg ? "-" : "") + std::to_string(whole);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 12 - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

PreciseNs PreciseNs::scaled(const Rational& ratio) const {
  // raw * num fits in 128 bits for any realistic clock period (< 2^63 units).
  return PreciseNs(round_div(raw_ * ratio.num(), ratio.den()));
}

}  // namespace slotnet
