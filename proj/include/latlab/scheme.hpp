#pragma once

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "latlab/cumulant.hpp"

namespace latlab {

// Which branch of the centering A_n applies, by the sign of λ - λ_1.
enum class ShiftCase { below, at, above };

struct SchemeRecord {
  int n = 0;
  bool valid = false;
  std::optional<unsigned long long> N;  // set when N_n fits an integer
  double log_N = 0.0;
  double c = 0.0;       // c_n = (1/n) log(N_n h / sqrt(2π ψ''(α) n))
  double b = 0.0;       // b_n = n I^{-1}(c_n)
  double delta = 0.0;   // {b_n}_h in [0, h)
  ShiftCase shift_case = ShiftCase::below;
  double log_A = 0.0;   // log A_n; -inf when A_n = 0 (A_n >= 0 in all cases)
};

struct SchemeOptions {
  // Explicit N_n table; entries override the default rule round(e^{λn}).
  std::map<int, unsigned long long> growth_table;
  std::optional<ShiftCase> force_case;  // override the λ vs λ_1 comparison
  std::size_t cap = 10'000'000;         // row-law cap for the λ = λ_1 centering
};

// Normalization data of the limit theorem for fixed λ: per-n records of
// N_n, c_n, b_n, Δ_n, A_n, B_n (log B_n = b_n).  Rows where c_n leaves
// (0, I(β_{+∞}-)) are kept but marked invalid.
class Scheme {
 public:
  Scheme(CumulantProfile profile, double lambda, int n_max, SchemeOptions opts = {});

  const CumulantProfile& profile() const { return profile_; }
  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  double span() const { return profile_.dist().span(); }
  double psi_alpha_d1() const { return psi_alpha_d1_; }
  double psi_alpha_d2() const { return psi_alpha_d2_; }
  int n_min() const { return n_min_; }

  const std::vector<SchemeRecord>& records() const { return records_; }
  const SchemeRecord& at(int n) const;  // throws OutOfRange if invalid/absent

  // All valid n in [n_lo, n_hi] whose Δ_n is within eps of delta_target on
  // the circle R/hZ, ascending.  Empty result is not an error.
  std::vector<int> find_subsequence(double delta_target, double eps,
                                    int n_lo = 1,
                                    int n_hi = std::numeric_limits<int>::max()) const;

  // n I((b_n + x)/n) - log(N_n h / sqrt(2π ψ''(α) n)) - αx; tends to 0.
  double lemma_aux_residual(int n, double x) const;

 private:
  CumulantProfile profile_;
  double lambda_;
  double alpha_;
  double psi_alpha_d1_;
  double psi_alpha_d2_;
  int n_min_ = 0;
  std::vector<SchemeRecord> records_;
};

}  // namespace latlab
