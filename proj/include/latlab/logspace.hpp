#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace latlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b), tolerant of -inf arguments.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// log sum of exponentials over a range.
inline double log_sum(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct KahanComplexSum {
  KahanSum re, im;
  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

// Entire part [b]_h and fractional part {b}_h with respect to the lattice hZ.
// Values of b/h within 1e-12 of an integer snap to it, so {b}_h never
// returns a spurious value just below h.
inline double entire_h(double b, double h) {
  double q = b / h;
  double r = std::round(q);
  if (std::abs(q - r) < 1e-12) return r * h;
  return std::floor(q) * h;
}

inline double frac_h(double b, double h) {
  double f = b - entire_h(b, h);
  if (f < 0) f = 0;
  if (f >= h) f = 0;
  return f;
}

// Distance on the circle R/hZ.
inline double circle_dist(double a, double b, double h) {
  double d = std::fmod(std::abs(a - b), h);
  return std::min(d, h - d);
}

}  // namespace latlab
