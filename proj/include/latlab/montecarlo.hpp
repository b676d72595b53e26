#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "latlab/limitlaw.hpp"
#include "latlab/scheme.hpp"

namespace latlab {

struct McRun {
  int n = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;  // (Z_n - A_n)/B_n, one per replicate
  double ks_distance = 0.0;     // vs F_{α,Δ_n}
  double cdf_error = 0.0;       // CDF table error bound used in the comparison
};

// sup-norm distance between the empirical CDF of samples and law.cdf.
double ks_distance(std::span<const double> samples, const SemiStableLaw& law);

// R replicates of (Z_n - A_n)/B_n with Z_n = Σ_{i<=N_n} e^{S_n,i}.  Each
// replicate uses its own generator stream derived from (seed, replicate),
// so results do not depend on evaluation order.
McRun sample_zn(const LatticeDistribution& d, const Scheme& scheme, int n,
                std::size_t replicates, std::uint64_t seed,
                std::size_t n_cap = 1'000'000, std::size_t cap = 10'000'000);

// Exact law of (Z_n - A_n)/B_n by enumeration of all N_n-tuples of row
// outcomes; feasible only at toy scale (support^N_n outcomes).
std::vector<std::pair<double, double>> enumerate_zn(const LatticeDistribution& d,
                                                    const Scheme& scheme, int n,
                                                    std::size_t max_outcomes = 4'000'000);

}  // namespace latlab
