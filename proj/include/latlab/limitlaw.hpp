#pragma once

#include <complex>
#include <memory>
#include <span>

#include "latlab/errors.hpp"

namespace latlab {

class CdfEvaluator;

// Semi-stable limit law F_{α,Δ}: infinitely divisible with Lévy measure
// Σ_{x in e^{hZ-Δ}} x^{-α} δ_x and shift constant C_{α,Δ;τ},
//   log φ(u) = iCu + Σ_x (e^{iux} - 1 - iux 1_{x<τ}) x^{-α}.
class SemiStableLaw {
 public:
  SemiStableLaw(double alpha, double delta, double h, double tau);
  SemiStableLaw(double alpha, double delta, double h);  // tau = default_tau
  ~SemiStableLaw();
  SemiStableLaw(SemiStableLaw&&) noexcept;
  SemiStableLaw& operator=(SemiStableLaw&&) noexcept;

  // Midpoint of a lattice gap in log-space, guaranteed off e^{hZ-Δ}.
  static double default_tau(double delta, double h);

  // Θ_{Δ;τ} = [Δ + log τ]_h - Δ.
  static double theta(double delta, double h, double tau);

  // C_{α,Δ;τ}: e^{-(α-1)Θ}/(1-e^{(α-1)h}) for α != 1, (1/h)[log τ + Δ]_h
  // for α = 1.
  static double shift_constant(double alpha, double delta, double h, double tau);

  double alpha() const { return alpha_; }
  double delta() const { return delta_; }
  double h() const { return h_; }
  double tau() const { return tau_; }
  double shift() const { return shift_; }

  // Lévy mass above τ': Σ x^{-α} 1_{x>τ'} = e^{-α(Θ_{Δ;τ'}+h)}/(1-e^{-αh}).
  double levy_tail(double tau_prime) const;

  // Truncated Lévy–Khintchine series; truncation tail < 1e-12 (1 + u²).
  std::complex<double> log_cf(double u) const;
  std::complex<double> cf(double u) const { return std::exp(log_cf(u)); }

  // max over the grid of | |φ(u)|^a - |φ(e^h u)| |; a defaults to e^{αh},
  // the exponent forced by the Lévy-measure self-similarity.
  double semistability_defect(std::span<const double> u_grid) const;
  double semistability_defect(std::span<const double> u_grid, double a) const;

  struct CdfValue {
    double value;
    double error;  // quadrature + interpolation + tail-band bound
  };

  // Gil-Pelaez inversion with a compound-Poisson split of the large jumps;
  // monotone on any fixed evaluation grid, clipped to [0, 1].
  CdfValue cdf_with_error(double x) const;
  double cdf(double x) const { return cdf_with_error(x).value; }
  double cdf_error_bound() const;  // table-level bound (quadrature + interp)

  // Builds the internal CDF table sized for |x| up to the hint; called
  // implicitly with a default hint on first cdf() use.
  void prepare_cdf(double x_hi_hint) const;

 private:
  friend class CdfEvaluator;
  std::complex<double> log_cf_truncated(double u, long long k_hi) const;

  double alpha_, delta_, h_, tau_;
  double theta_, shift_;
  mutable std::unique_ptr<CdfEvaluator> cdf_;
};

}  // namespace latlab
