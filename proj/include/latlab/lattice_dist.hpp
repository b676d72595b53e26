#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latlab/errors.hpp"

namespace latlab {

// Exact rational p/q used for span detection; floating span detection is
// ill-posed, so atom values are carried as rationals until the lattice is
// identified.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational parse(const std::string& text);
  // Best rational approximation by continued fractions; throws NotLattice
  // when no denominator <= max_den matches x within tol * max(1, |x|).
  static Rational from_double(double x, long long max_den = 1'000'000'000,
                              double tol = 1e-12);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct Atom {
  long long k = 0;      // lattice index: value = k * h after normalization
  double prob = 0.0;
  double log_prob = 0.0;
};

// Finite-support distribution on the lattice hZ (offset already removed).
class LatticeDistribution {
 public:
  // Span detection from exact rational values.  Returns the normalized
  // distribution: values shifted by the recorded offset so that every atom
  // sits at an integer multiple of the maximal span h.
  static LatticeDistribution detect_span(
      const std::vector<std::pair<Rational, double>>& atoms);
  static LatticeDistribution detect_span(
      const std::vector<std::pair<double, double>>& atoms);

  // Construct directly from lattice indices (used by tilting).
  LatticeDistribution(double h, double offset, std::vector<Atom> atoms);

  double span() const { return h_; }
  double offset() const { return offset_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  long long k_min() const { return atoms_.front().k; }
  long long k_max() const { return atoms_.back().k; }
  double value_min() const { return static_cast<double>(k_min()) * h_; }
  double value_max() const { return static_cast<double>(k_max()) * h_; }

  double mean() const;
  double variance() const;

 private:
  double h_ = 1.0;
  double offset_ = 0.0;
  std::vector<Atom> atoms_;  // sorted by k, strictly increasing
};

// Exact pmf of S_n = V_1 + ... + V_n on the lattice hZ.
struct RowLaw {
  int n = 0;
  double h = 1.0;
  long long k_min = 0;
  std::vector<double> log_pmf;  // index j <-> lattice point (k_min + j) * h

  long long k_max() const { return k_min + static_cast<long long>(log_pmf.size()) - 1; }
  double log_at(long long k) const;
  double mean() const;
  double variance() const;
};

// n-fold convolution by repeated squaring in extended-range linear space.
RowLaw exact_pmf(const LatticeDistribution& d, int n,
                 std::size_t cap = 10'000'000);

// One extra convolution step S_n -> S_{n+1} (cheaper for sweeps over n;
// slightly less accurate than exact_pmf for isolated n).
RowLaw convolve_step(const RowLaw& row, const LatticeDistribution& d,
                     std::size_t cap = 10'000'000);

// Walker alias table over a RowLaw; O(1) per draw.
class AliasTable {
 public:
  explicit AliasTable(const RowLaw& row);
  // Returns a lattice index k; value of the draw is k * h.
  long long sample(std::uint64_t& state) const;

 private:
  long long k_min_ = 0;
  std::vector<double> threshold_;
  std::vector<std::uint32_t> alias_;
};

// splitmix64; used to derive independent per-replicate streams.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

// count i.i.d. draws of the lattice index of S_n, deterministic in seed.
std::vector<long long> sample_sn(const LatticeDistribution& d, int n,
                                 std::size_t count, std::uint64_t seed,
                                 std::size_t cap = 10'000'000);

}  // namespace latlab
