#include "latlab/rowarray.hpp"

#include <algorithm>
#include <cmath>

#include "latlab/logspace.hpp"

namespace latlab {

namespace {

// Largest k with k*h <= b, treating points within 1e-12 of b as equal.
long long cut_le(double b, double h) {
  double q = b / h;
  double r = std::round(q);
  if (std::abs(q - r) < 1e-12) return static_cast<long long>(r);
  return static_cast<long long>(std::floor(q));
}

// Smallest k with k*h >= b, same snapping rule.
long long cut_ge(double b, double h) {
  double q = b / h;
  double r = std::round(q);
  if (std::abs(q - r) < 1e-12) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(q));
}

double log_sum_range(const RowLaw& row, long long k_lo, long long k_hi,
                     double moment_t, double b) {
  double acc = kNegInf;
  k_lo = std::max(k_lo, row.k_min);
  k_hi = std::min(k_hi, row.k_max());
  for (long long k = k_lo; k <= k_hi; ++k) {
    double lp = row.log_at(k);
    if (lp == kNegInf) continue;
    acc = log_add(acc, lp + moment_t * (static_cast<double>(k) * row.h - b));
  }
  return acc;
}

}  // namespace

RowMoments row_moments(const RowLaw& row, const Scheme& scheme, int n, double tau) {
  if (row.n != n) throw OutOfRange("row law does not match n");
  const SchemeRecord& rec = scheme.at(n);
  const double h = row.h;
  const double log_tau = std::log(tau);
  const long long kc = cut_le(rec.b + log_tau, h);

  RowMoments out;
  out.n = n;
  out.tau = tau;
  out.delta_n = rec.delta;

  double log_tail = log_sum_range(row, kc + 1, row.k_max(), 0.0, rec.b);
  out.tail = std::exp(rec.log_N + log_tail);

  double log_m1 = log_sum_range(row, row.k_min, kc, 1.0, rec.b);
  double log_m2 = log_sum_range(row, row.k_min, kc, 2.0, rec.b);
  out.trunc_second = std::exp(rec.log_N + log_m2);
  out.trunc_var = out.trunc_second - std::exp(2.0 * (rec.log_N + log_m1) - rec.log_N);

  switch (rec.shift_case) {
    case ShiftCase::below:
      out.trunc_mean_centered = std::exp(rec.log_N + log_m1);
      break;
    case ShiftCase::above:
      // N_n E[W 1_{W<=τ}] - N_n E[W] = -N_n E[W 1_{W>τ}]; computed directly
      // to avoid cancellation between two nearly equal exponentials.
      out.trunc_mean_centered =
          -std::exp(rec.log_N + log_sum_range(row, kc + 1, row.k_max(), 1.0, rec.b));
      break;
    case ShiftCase::at: {
      long long k1 = cut_ge(rec.b, h);  // first k with W >= 1
      if (log_tau >= 0) {
        out.trunc_mean_centered =
            std::exp(rec.log_N + log_sum_range(row, k1, kc, 1.0, rec.b));
      } else {
        out.trunc_mean_centered =
            -std::exp(rec.log_N + log_sum_range(row, kc + 1, k1 - 1, 1.0, rec.b));
      }
      break;
    }
  }
  return out;
}

RowMoments row_moments(const LatticeDistribution& d, const Scheme& scheme, int n,
                       double tau, std::size_t cap) {
  return row_moments(exact_pmf(d, n, cap), scheme, n, tau);
}

std::vector<ConditionRow> condition_table(const LatticeDistribution& d,
                                          const Scheme& scheme, double tau,
                                          std::span<const int> n_list,
                                          std::size_t cap) {
  std::vector<int> ns(n_list.begin(), n_list.end());
  std::sort(ns.begin(), ns.end());
  std::vector<ConditionRow> out;
  out.reserve(ns.size());
  RowLaw row;
  for (int n : ns) {
    if (row.n == 0) {
      row = exact_pmf(d, n, cap);
    } else {
      while (row.n < n) row = convolve_step(row, d, cap);
    }
    ConditionRow cr;
    cr.moments = row_moments(row, scheme, n, tau);
    try {
      SemiStableLaw law(scheme.alpha(), cr.moments.delta_n, d.span(), tau);
      cr.tail_limit = law.levy_tail(tau);
      cr.shift_limit = law.shift();
    } catch (const TauOnLattice&) {
      cr.tail_limit = std::numeric_limits<double>::quiet_NaN();
      cr.shift_limit = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(cr);
  }
  return out;
}

namespace {

struct CfTerms {
  RowLaw row;
  double b = 0.0;
  double log_n_big = 0.0;
  double a_over_b = 0.0;
};

CfTerms cf_setup(const LatticeDistribution& d, const Scheme& scheme, int n,
                 std::size_t cap) {
  const SchemeRecord& rec = scheme.at(n);
  CfTerms t;
  t.row = exact_pmf(d, n, cap);
  t.b = rec.b;
  t.log_n_big = rec.log_N;
  t.a_over_b = rec.shift_case == ShiftCase::below ? 0.0 : std::exp(rec.log_A - rec.b);
  return t;
}

// g_n(u) - 1 = Σ_k P[S_n = hk] (e^{iu e^{hk - b_n}} - 1), compensated.
std::complex<double> g_minus_one(const CfTerms& t, double u) {
  KahanComplexSum s;
  const RowLaw& row = t.row;
  for (long long k = row.k_min; k <= row.k_max(); ++k) {
    double lp = row.log_at(k);
    if (lp == kNegInf) continue;
    double le = static_cast<double>(k) * row.h - t.b;
    // Terms far above b_n carry mass too small to matter even after the
    // N_n-fold amplification; dropping them also avoids overflow of e^{le}.
    if (le > 0 && lp + t.log_n_big < -46.0) continue;
    double w = std::exp(le);
    double theta = u * w;
    double p = std::exp(lp);
    double half = std::sin(0.5 * theta);
    s.add({p * (-2.0 * half * half), p * std::sin(theta)});
  }
  return s.value();
}

}  // namespace

std::vector<std::complex<double>> exact_normalized_cf(const LatticeDistribution& d,
                                                      const Scheme& scheme, int n,
                                                      std::span<const double> u_grid,
                                                      std::size_t cap) {
  const SchemeRecord& rec = scheme.at(n);
  CfTerms t = cf_setup(d, scheme, n, cap);
  // N_n enters only as the multiplier of log g_n; when it no longer fits an
  // integer type, e^{log N_n} carries it with ~1e-16 relative error, which
  // perturbs N_n log g_n by O(|log g_n|) = O(1/N_n) absolute.
  const double nn = rec.N ? static_cast<double>(*rec.N) : std::exp(rec.log_N);

  std::vector<std::complex<double>> out;
  out.reserve(u_grid.size());
  for (double u : u_grid) {
    std::complex<double> s = g_minus_one(t, u);
    std::complex<double> log_g;
    if (rec.N && *rec.N <= 1'000'000ULL) {
      log_g = std::log(std::complex<double>(1.0, 0.0) + s);
    } else {
      // |s| <= O(1)/N_n here; series for log(1+s) keeps full precision.
      log_g = s * (1.0 - s * (0.5 - s * (1.0 / 3.0 - s * 0.25)));
    }
    std::complex<double> log_phi = nn * log_g - std::complex<double>(0.0, u * t.a_over_b);
    out.push_back(std::exp(log_phi));
  }
  return out;
}

std::vector<std::complex<double>> exact_normalized_cf_binpow(
    const LatticeDistribution& d, const Scheme& scheme, int n,
    std::span<const double> u_grid, std::size_t cap) {
  const SchemeRecord& rec = scheme.at(n);
  if (!rec.N) throw CapExceeded("N_n is not representable as an integer");
  CfTerms t = cf_setup(d, scheme, n, cap);

  std::vector<std::complex<double>> out;
  out.reserve(u_grid.size());
  for (double u : u_grid) {
    std::complex<double> g = std::complex<double>(1.0, 0.0) + g_minus_one(t, u);
    std::complex<double> acc(1.0, 0.0);
    unsigned long long e = *rec.N;
    std::complex<double> base = g;
    while (e > 0) {
      if (e & 1ULL) acc *= base;
      e >>= 1ULL;
      if (e > 0) base *= base;
    }
    out.push_back(std::polar(1.0, -u * t.a_over_b) * acc);
  }
  return out;
}

}  // namespace latlab
