#include "latlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "latlab/logspace.hpp"

namespace latlab {

double ks_distance(std::span<const double> samples, const SemiStableLaw& law) {
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double r = static_cast<double>(xs.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = law.cdf(xs[i]);
    sup = std::max(sup, f - static_cast<double>(i) / r);
    sup = std::max(sup, static_cast<double>(i + 1) / r - f);
  }
  return sup;
}

McRun sample_zn(const LatticeDistribution& d, const Scheme& scheme, int n,
                std::size_t replicates, std::uint64_t seed,
                std::size_t n_cap, std::size_t cap) {
  const SchemeRecord& rec = scheme.at(n);
  if (!rec.N || *rec.N > n_cap) throw CapExceeded("N_n exceeds the sampling cap");
  const unsigned long long big_n = *rec.N;

  RowLaw row = exact_pmf(d, n, cap);
  AliasTable table(row);
  const double h = row.h;
  const double shift =
      rec.shift_case == ShiftCase::below ? 0.0 : std::exp(rec.log_A - rec.b);

  McRun run;
  run.n = n;
  run.replicates = replicates;
  run.seed = seed;
  run.samples.resize(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    std::uint64_t state = stream_seed(seed, r);
    KahanSum sum;
    for (unsigned long long i = 0; i < big_n; ++i) {
      long long k = table.sample(state);
      sum.add(std::exp(static_cast<double>(k) * h - rec.b));
    }
    run.samples[r] = sum.value() - shift;
  }

  SemiStableLaw law(scheme.alpha(), rec.delta, d.span());
  double lo = *std::min_element(run.samples.begin(), run.samples.end());
  double hi = *std::max_element(run.samples.begin(), run.samples.end());
  law.prepare_cdf(std::max({std::abs(lo), std::abs(hi), 8.0}));
  run.ks_distance = ks_distance(run.samples, law);
  run.cdf_error = law.cdf_error_bound();
  return run;
}

std::vector<std::pair<double, double>> enumerate_zn(const LatticeDistribution& d,
                                                    const Scheme& scheme, int n,
                                                    std::size_t max_outcomes) {
  const SchemeRecord& rec = scheme.at(n);
  if (!rec.N) throw CapExceeded("N_n exceeds the enumeration cap");
  const unsigned long long big_n = *rec.N;

  RowLaw row = exact_pmf(d, n, 100'000);
  const std::size_t m = row.log_pmf.size();
  double combos = std::pow(static_cast<double>(m), static_cast<double>(big_n));
  if (combos > static_cast<double>(max_outcomes)) {
    throw CapExceeded("enumeration would exceed max_outcomes");
  }
  const double shift =
      rec.shift_case == ShiftCase::below ? 0.0 : std::exp(rec.log_A - rec.b);

  std::vector<double> w(m), p(m);
  for (std::size_t j = 0; j < m; ++j) {
    w[j] = std::exp(static_cast<double>(row.k_min + static_cast<long long>(j)) * row.h -
                    rec.b);
    p[j] = std::exp(row.log_pmf[j]);
  }

  std::vector<std::pair<double, double>> out{{-shift, 1.0}};
  for (unsigned long long i = 0; i < big_n; ++i) {
    std::vector<std::pair<double, double>> next;
    next.reserve(out.size() * m);
    for (const auto& [v, q] : out) {
      for (std::size_t j = 0; j < m; ++j) {
        if (p[j] > 0.0) next.emplace_back(v + w[j], q * p[j]);
      }
    }
    out = std::move(next);
  }

  std::sort(out.begin(), out.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& [v, q] : out) {
    if (!merged.empty() &&
        std::abs(v - merged.back().first) <= 1e-12 * (1.0 + std::abs(v))) {
      merged.back().second += q;
    } else {
      merged.emplace_back(v, q);
    }
  }
  return merged;
}

}  // namespace latlab
