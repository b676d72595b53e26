#pragma once

#include <utility>
#include <vector>

#include "latlab/lattice_dist.hpp"

namespace latlab::test {

inline LatticeDistribution bernoulli(double p = 0.5) {
  return LatticeDistribution::detect_span(
      std::vector<std::pair<Rational, double>>{{{0, 1}, 1.0 - p}, {{1, 1}, p}});
}

inline LatticeDistribution three_atom() {
  // {-1, 1/2, 2} with probs {0.2, 0.5, 0.3}: span 3/2, offset 1/2, so the
  // normalized lattice part takes values {-3/2, 0, 3/2}.
  return LatticeDistribution::detect_span(
      std::vector<std::pair<Rational, double>>{
          {{-1, 1}, 0.2}, {{1, 2}, 0.5}, {{2, 1}, 0.3}});
}

}  // namespace latlab::test
