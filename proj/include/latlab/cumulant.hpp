#pragma once

#include "latlab/lattice_dist.hpp"

namespace latlab {

// Cumulant generating function ψ(t) = log E e^{tV} of a finite-support
// lattice distribution, with the derived analytic objects: rate function I,
// its inverse on the increasing branch, critical points, and tilts.
class CumulantProfile {
 public:
  explicit CumulantProfile(LatticeDistribution d);

  const LatticeDistribution& dist() const { return dist_; }

  double psi(double t) const;
  double psi_d1(double t) const;  // tilted mean
  double psi_d2(double t) const;  // tilted variance, > 0

  double beta_min() const { return beta_min_; }    // β_{-∞} = min atom
  double beta_mean() const { return beta_mean_; }  // β_0 = E V
  double beta_max() const { return beta_max_; }    // β_{+∞} = max atom
  double lambda1() const { return lambda1_; }      // ψ'(1) - ψ(1)
  double lambda2() const { return lambda2_; }      // 2ψ'(2) - ψ(2)

  // sup of I on the increasing branch: I(β_{+∞}) = -log P[V = max].
  double rate_sup() const { return rate_sup_; }

  struct Rate {
    double value;  // I(β)
    double tilt;   // t* with ψ'(t*) = β
  };

  // Legendre-Fenchel transform I(β) = β t* - ψ(t*), β in (β_{-∞}, β_{+∞}).
  Rate rate(double beta) const;

  // Solves ψ'(t) = β; strictly increasing, bracketed Newton.
  double solve_tilt(double beta) const;

  // β in (β_0, β_{+∞}) with I(β) = c; c in (0, rate_sup()).
  double rate_inverse(double c) const;

  // Unique α in (0, 2) with αψ'(α) - ψ(α) = λ; λ in (0, λ_2).
  double solve_alpha(double lambda) const;

  std::pair<double, double> critical_points() const { return {lambda1_, lambda2_}; }

 private:
  // Root of g(t) = tψ'(t) - ψ(t) = c on t > 0 (g increasing there).
  double solve_rate_level(double c) const;

  LatticeDistribution dist_;
  double beta_min_, beta_mean_, beta_max_;
  double lambda1_, lambda2_;
  double rate_sup_;
};

// Exponential change of measure: probabilities e^{t0 x - ψ(t0)} P[V = x].
LatticeDistribution tilt(const LatticeDistribution& d, double t0);

}  // namespace latlab
