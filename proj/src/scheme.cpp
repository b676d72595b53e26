#include "latlab/scheme.hpp"

#include <cmath>

#include "latlab/logspace.hpp"

namespace latlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kCaseTol = 1e-12;

// Largest lattice index k with k*h strictly below b; a point within
// 1e-12 of b itself is treated as equal to b and excluded.
long long strict_cut_below(double b, double h) {
  double q = b / h;
  double r = std::round(q);
  if (std::abs(q - r) < 1e-12) return static_cast<long long>(r) - 1;
  return static_cast<long long>(std::floor(q));
}

}  // namespace

Scheme::Scheme(CumulantProfile profile, double lambda, int n_max, SchemeOptions opts)
    : profile_(std::move(profile)), lambda_(lambda) {
  alpha_ = profile_.solve_alpha(lambda);  // throws OutOfRange for bad λ
  psi_alpha_d1_ = profile_.psi_d1(alpha_);
  psi_alpha_d2_ = profile_.psi_d2(alpha_);

  ShiftCase shift_case;
  if (opts.force_case) {
    shift_case = *opts.force_case;
  } else if (std::abs(lambda - profile_.lambda1()) < kCaseTol) {
    shift_case = ShiftCase::at;
  } else if (lambda < profile_.lambda1()) {
    shift_case = ShiftCase::below;
  } else {
    shift_case = ShiftCase::above;
  }

  const double h = profile_.dist().span();
  const double psi1 = profile_.psi(1.0);
  const double log_h = std::log(h);

  // Row law maintained incrementally; only the λ = λ_1 centering needs it.
  RowLaw row;
  bool row_ready = false;

  records_.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    SchemeRecord& rec = records_[static_cast<std::size_t>(n - 1)];
    rec.n = n;
    rec.shift_case = shift_case;

    auto it = opts.growth_table.find(n);
    if (it != opts.growth_table.end()) {
      rec.N = it->second;
      rec.log_N = std::log(static_cast<double>(it->second));
    } else {
      double grow = lambda * n;
      if (grow < 42.0) {  // e^42 < 2^62
        unsigned long long nn =
            std::max<unsigned long long>(1, static_cast<unsigned long long>(std::llround(std::exp(grow))));
        rec.N = nn;
        rec.log_N = std::log(static_cast<double>(nn));
      } else {
        rec.log_N = grow;  // rounding to an integer is below double precision here
      }
    }

    rec.c = (rec.log_N + log_h - 0.5 * std::log(kTwoPi * psi_alpha_d2_ * n)) / n;
    if (!(rec.c > 0.0 && rec.c < profile_.rate_sup())) continue;  // skipped n

    rec.b = n * profile_.rate_inverse(rec.c);
    rec.delta = frac_h(rec.b, h);
    rec.valid = true;
    if (n_min_ == 0) n_min_ = n;

    switch (shift_case) {
      case ShiftCase::below:
        rec.log_A = kNegInf;
        break;
      case ShiftCase::above:
        rec.log_A = rec.log_N + n * psi1;
        break;
      case ShiftCase::at: {
        if (!row_ready) {
          row = exact_pmf(profile_.dist(), n, opts.cap);
          row_ready = true;
        }
        while (row.n < n) row = convolve_step(row, profile_.dist(), opts.cap);
        long long kcut = strict_cut_below(rec.b, h);
        double acc = kNegInf;
        for (long long k = row.k_min; k <= std::min(kcut, row.k_max()); ++k) {
          acc = log_add(acc, static_cast<double>(k) * h + row.log_at(k));
        }
        rec.log_A = rec.log_N + acc;
        break;
      }
    }
  }
}

const SchemeRecord& Scheme::at(int n) const {
  if (n < 1 || n > static_cast<int>(records_.size())) {
    throw OutOfRange("n outside the scheme range");
  }
  const SchemeRecord& rec = records_[static_cast<std::size_t>(n - 1)];
  if (!rec.valid) throw OutOfRange("n is below n_min (c_n outside valid range)");
  return rec;
}

std::vector<int> Scheme::find_subsequence(double delta_target, double eps,
                                          int n_lo, int n_hi) const {
  const double h = profile_.dist().span();
  std::vector<int> out;
  for (const auto& rec : records_) {
    if (!rec.valid || rec.n < n_lo || rec.n > n_hi) continue;
    if (circle_dist(rec.delta, delta_target, h) < eps) out.push_back(rec.n);
  }
  return out;
}

double Scheme::lemma_aux_residual(int n, double x) const {
  const SchemeRecord& rec = at(n);
  double beta = (rec.b + x) / n;
  if (!(beta > profile_.beta_mean() && beta < profile_.beta_max())) {
    throw OutOfRange("(b_n + x)/n outside (beta_0, beta_max)");
  }
  return n * profile_.rate(beta).value - n * rec.c - alpha_ * x;
}

}  // namespace latlab
