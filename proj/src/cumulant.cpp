#include "latlab/cumulant.hpp"

#include <algorithm>
#include <cmath>

#include "latlab/logspace.hpp"

namespace latlab {

CumulantProfile::CumulantProfile(LatticeDistribution d) : dist_(std::move(d)) {
  beta_min_ = dist_.value_min();
  beta_max_ = dist_.value_max();
  beta_mean_ = dist_.mean();
  lambda1_ = psi_d1(1.0) - psi(1.0);
  lambda2_ = 2.0 * psi_d1(2.0) - psi(2.0);
  rate_sup_ = -dist_.atoms().back().log_prob;  // I(β_{+∞}) = -log P[V = max]
}

double CumulantProfile::psi(double t) const {
  double m = kNegInf;
  for (const auto& a : dist_.atoms()) {
    m = std::max(m, a.log_prob + t * static_cast<double>(a.k) * dist_.span());
  }
  double s = 0.0;
  for (const auto& a : dist_.atoms()) {
    s += std::exp(a.log_prob + t * static_cast<double>(a.k) * dist_.span() - m);
  }
  return m + std::log(s);
}

double CumulantProfile::psi_d1(double t) const {
  double p = psi(t);
  double s = 0.0;
  for (const auto& a : dist_.atoms()) {
    double x = static_cast<double>(a.k) * dist_.span();
    s += std::exp(a.log_prob + t * x - p) * x;
  }
  return s;
}

double CumulantProfile::psi_d2(double t) const {
  double p = psi(t);
  double mu = psi_d1(t);
  double s = 0.0;
  for (const auto& a : dist_.atoms()) {
    double x = static_cast<double>(a.k) * dist_.span();
    double d = x - mu;
    s += std::exp(a.log_prob + t * x - p) * d * d;
  }
  return s;
}

double CumulantProfile::solve_tilt(double beta) const {
  if (!(beta > beta_min_ && beta < beta_max_)) {
    throw OutOfRange("beta outside (beta_min, beta_max)");
  }
  // Bracket by monotonicity of ψ', expanding geometrically from 0.
  double lo = 0.0, hi = 0.0, step = 1.0;
  if (psi_d1(0.0) < beta) {
    while (psi_d1(hi) < beta) { lo = hi; hi += step; step *= 2.0; }
  } else {
    while (psi_d1(lo) > beta) { hi = lo; lo -= step; step *= 2.0; }
  }
  double t = 0.5 * (lo + hi);
  const double tol = 1e-13 * (std::abs(beta) + 1.0);
  for (int it = 0; it < 200; ++it) {
    double f = psi_d1(t) - beta;
    if (std::abs(f) < tol) return t;
    if (f > 0) hi = t; else lo = t;
    double step_newton = f / psi_d2(t);
    double t_next = t - step_newton;
    if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);
    if (t_next == t) break;
    t = t_next;
  }
  return t;
}

CumulantProfile::Rate CumulantProfile::rate(double beta) const {
  double t = solve_tilt(beta);
  return {beta * t - psi(t), t};
}

double CumulantProfile::solve_rate_level(double c) const {
  // g(t) = tψ'(t) - ψ(t), g(0) = 0, increasing on t > 0 with g' = tψ''.
  auto g = [this](double t) { return t * psi_d1(t) - psi(t); };
  double lo = 0.0, hi = 1.0;
  while (g(hi) < c) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw OutOfRange("rate level out of reach");
  }
  double t = std::max(0.5 * (lo + hi), 1e-8);
  const double tol = 1e-14 * (1.0 + std::abs(c));
  for (int it = 0; it < 200; ++it) {
    double f = g(t) - c;
    if (std::abs(f) < tol) return t;
    if (f > 0) hi = t; else lo = t;
    double deriv = t * psi_d2(t);
    double t_next = deriv > 0 ? t - f / deriv : 0.5 * (lo + hi);
    if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);
    if (t_next == t) break;
    t = t_next;
  }
  return t;
}

double CumulantProfile::rate_inverse(double c) const {
  if (!(c > 0.0 && c < rate_sup_)) {
    throw OutOfRange("rate level outside (0, I(beta_max-))");
  }
  return psi_d1(solve_rate_level(c));
}

double CumulantProfile::solve_alpha(double lambda) const {
  if (!(lambda > 0.0)) throw OutOfRange("lambda must be positive");
  if (!(lambda < lambda2_)) {
    throw OutOfRange("lambda >= lambda2: outside the slow-growth regime");
  }
  return solve_rate_level(lambda);
}

LatticeDistribution tilt(const LatticeDistribution& d, double t0) {
  CumulantProfile prof(d);
  double p0 = prof.psi(t0);
  std::vector<Atom> atoms = d.atoms();
  double sum = 0.0;
  for (auto& a : atoms) {
    a.prob = std::exp(a.log_prob + t0 * static_cast<double>(a.k) * d.span() - p0);
    sum += a.prob;
  }
  for (auto& a : atoms) a.prob /= sum;  // remove O(eps) normalization drift
  return LatticeDistribution(d.span(), d.offset(), std::move(atoms));
}

}  // namespace latlab
