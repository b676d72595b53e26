#pragma once

#include "latlab/cumulant.hpp"

namespace latlab {

enum class TailKind { point, upper_tail, lower_tail };

// Lattice Bahadur-Rao/Petrov asymptotics against the exact convolution.
// Probabilities are kept in log-space; ratio = exp(log_exact - log_asymptotic).
struct LdEstimate {
  int n = 0;
  double beta = 0.0;  // snapped to n^{-1}hZ
  TailKind kind = TailKind::point;
  double log_asymptotic = 0.0;
  double log_exact = 0.0;
  double ratio = 0.0;
};

// P[S_n = nβ] ~ h e^{-nI(β)} / sqrt(2π ψ''(α) n), α the tilt with ψ'(α) = β.
LdEstimate ld_point(const CumulantProfile& profile, int n, double beta,
                    std::size_t cap = 10'000'000);

// P[S_n >= nβ] ~ h e^{-nI(β)} / ((1 - e^{-αh}) sqrt(2π ψ''(α) n)), β > β_0.
LdEstimate ld_upper(const CumulantProfile& profile, int n, double beta,
                    std::size_t cap = 10'000'000);

// P[S_n <= nβ] ~ h e^{-nI(β)} / ((1 - e^{αh}) sqrt(2π ψ''(α) n)), β < β_0
// (α < 0 there, so the denominator is positive).
LdEstimate ld_lower(const CumulantProfile& profile, int n, double beta,
                    std::size_t cap = 10'000'000);

// Overloads reusing a precomputed row law (must satisfy row.n == n).
LdEstimate ld_point(const CumulantProfile& profile, const RowLaw& row, double beta);
LdEstimate ld_upper(const CumulantProfile& profile, const RowLaw& row, double beta);
LdEstimate ld_lower(const CumulantProfile& profile, const RowLaw& row, double beta);

}  // namespace latlab
