#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latlab/lattice_dist.hpp"

namespace latlab {

// JSON experiment config with defaults filled in.  Floats round-trip at 17
// significant digits, so echoing the effective config and re-parsing it
// reproduces the same struct bit for bit.
struct ExperimentConfig {
  struct AtomSpec {
    std::string value;  // rational string ("3/2") or decimal literal
    double prob = 0.0;
  };
  struct UGrid {
    double min = -5.0;
    double max = 5.0;
    int count = 201;
  };
  struct Mc {
    std::size_t replicates = 10'000;
    std::uint64_t seed = 1;
    int n = 0;  // 0: pick the largest feasible n of the first delta target
    std::size_t cap = 1'000'000;
  };

  std::vector<AtomSpec> distribution;
  double lambda = 0.2;
  double tau = 0.0;  // 0 means "auto" (lattice-gap midpoint)
  bool tau_auto = true;
  std::vector<double> delta_targets{0.0};
  double subsequence_epsilon = 0.02;
  int n_max = 400;
  UGrid u_grid;
  Mc mc;
  std::string output = "out";

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  std::string to_json_text() const;  // effective config, stable field order
  std::uint64_t hash() const;        // FNV-1a of to_json_text()

  LatticeDistribution make_distribution() const;
  // Validates against module preconditions; throws ConfigInvalid naming the
  // offending field.
  void validate() const;
};

}  // namespace latlab
