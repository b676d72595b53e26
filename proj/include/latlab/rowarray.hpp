#pragma once

#include <complex>
#include <span>
#include <vector>

#include "latlab/limitlaw.hpp"
#include "latlab/scheme.hpp"

namespace latlab {

// Exact truncated moments of W_n = e^{S_n - b_n}, scaled by N_n.
struct RowMoments {
  int n = 0;
  double tau = 0.0;
  double delta_n = 0.0;
  double tail = 0.0;          // N_n P[W_n > τ]
  double trunc_second = 0.0;  // N_n E[W_n² 1_{W_n <= τ}]
  double trunc_var = 0.0;     // N_n Var[W_n 1_{W_n <= τ}]
  double trunc_mean_centered = 0.0;  // N_n E[W_n 1_{W_n <= τ}] - A_n/B_n
};

RowMoments row_moments(const RowLaw& row, const Scheme& scheme, int n, double tau);
RowMoments row_moments(const LatticeDistribution& d, const Scheme& scheme, int n,
                       double tau, std::size_t cap = 10'000'000);

struct ConditionRow {
  RowMoments moments;
  // Limit targets from the semi-stable law at Δ = Δ_n; NaN when τ happens
  // to sit on e^{hZ-Δ_n}.
  double tail_limit = 0.0;
  double shift_limit = 0.0;
};

std::vector<ConditionRow> condition_table(const LatticeDistribution& d,
                                          const Scheme& scheme, double tau,
                                          std::span<const int> n_list,
                                          std::size_t cap = 10'000'000);

// Exact characteristic function of (Z_n - A_n)/B_n at finite n:
// φ_n(u) = e^{-iu A_n/B_n} g_n(u)^{N_n},  g_n(u) = E e^{iu e^{S_n - b_n}}.
// The N_n-th power is taken through N_n log(1 + (g_n - 1)) with g_n - 1
// accumulated directly in compensated summation; for small N_n this matches
// binary exponentiation, and unlike it the accuracy does not degrade with
// N_n (beyond 2^63, N_n is carried as e^{log N_n}).
std::vector<std::complex<double>> exact_normalized_cf(const LatticeDistribution& d,
                                                      const Scheme& scheme, int n,
                                                      std::span<const double> u_grid,
                                                      std::size_t cap = 10'000'000);

// Reference implementation by binary exponentiation of g_n(u); loses
// accuracy beyond N_n ~ 1e8 and exists as an independent cross-check.
std::vector<std::complex<double>> exact_normalized_cf_binpow(
    const LatticeDistribution& d, const Scheme& scheme, int n,
    std::span<const double> u_grid, std::size_t cap = 10'000'000);

}  // namespace latlab
