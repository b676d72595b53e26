#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "latlab/logspace.hpp"

namespace latlab {

// Nonnegative real with an extended binary exponent: value = m * 2^e,
// m in [0.5, 1) or m == 0.  Keeps n-fold convolutions of probability
// vectors in linear space (full relative precision) without underflow,
// for probabilities far below DBL_MIN.
struct ExtReal {
  double m = 0.0;
  std::int64_t e = 0;

  static ExtReal normalized(double mant, std::int64_t exp2) {
    if (mant == 0.0) return {};
    int k;
    double nm = std::frexp(mant, &k);
    return {nm, exp2 + k};
  }

  static ExtReal from_double(double x) { return normalized(x, 0); }

  static ExtReal from_log(double lx) {
    if (lx == kNegInf) return {};
    double q = lx / 0.6931471805599453094;
    std::int64_t e0 = static_cast<std::int64_t>(std::floor(q));
    double mant = std::exp(lx - static_cast<double>(e0) * 0.6931471805599453094);
    return normalized(mant, e0);
  }

  bool zero() const { return m == 0.0; }

  double log() const {
    if (zero()) return kNegInf;
    return std::log(m) + static_cast<double>(e) * 0.6931471805599453094;
  }

  // Lossy: underflows/overflows outside double range.
  double to_double() const {
    if (zero()) return 0.0;
    if (e < -1070) return 0.0;
    if (e > 1020) return std::ldexp(m, 1020);  // effectively +inf scale
    return std::ldexp(m, static_cast<int>(e));
  }

  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if (a.zero() || b.zero()) return {};
    return normalized(a.m * b.m, a.e + b.e);
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.zero()) return b;
    if (b.zero()) return a;
    if (a.e < b.e) std::swap(a, b);
    std::int64_t d = a.e - b.e;
    if (d > 64) return a;
    return normalized(a.m + std::ldexp(b.m, -static_cast<int>(d)), a.e);
  }
};

// Pairwise summation, O(log n) rounding depth.
inline ExtReal pairwise_sum(std::span<ExtReal> xs) {
  if (xs.empty()) return {};
  if (xs.size() == 1) return xs[0];
  std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace latlab
