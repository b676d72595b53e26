#include "latlab/largedev.hpp"

#include <cmath>

#include "latlab/logspace.hpp"

namespace latlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Snaps β to the nearest point of n^{-1}hZ; rejects inputs further than 1e-9.
long long snap_to_lattice(int n, double beta, double h) {
  double q = n * beta / h;
  double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) {
    throw OffLattice("n*beta is not a lattice point of hZ");
  }
  return static_cast<long long>(r);
}

LdEstimate make_estimate(const CumulantProfile& profile, const RowLaw& row,
                         double beta, TailKind kind) {
  const double h = row.h;
  const int n = row.n;
  long long k = snap_to_lattice(n, beta, h);
  beta = static_cast<double>(k) * h / n;

  if (!(beta > profile.beta_min() && beta < profile.beta_max())) {
    throw OutOfRange("beta outside (beta_min, beta_max)");
  }
  if (kind == TailKind::upper_tail && !(beta > profile.beta_mean())) {
    throw OutOfRange("upper tail requires beta > beta_0");
  }
  if (kind == TailKind::lower_tail && !(beta < profile.beta_mean())) {
    throw OutOfRange("lower tail requires beta < beta_0");
  }

  auto [rate, tilt] = profile.rate(beta);
  double log_asym = std::log(h) - n * rate - 0.5 * std::log(kTwoPi * profile.psi_d2(tilt) * n);
  switch (kind) {
    case TailKind::point:
      break;
    case TailKind::upper_tail:
      log_asym -= std::log1p(-std::exp(-tilt * h));
      break;
    case TailKind::lower_tail:
      log_asym -= std::log1p(-std::exp(tilt * h));  // tilt < 0 here
      break;
  }

  double log_exact;
  switch (kind) {
    case TailKind::point:
      log_exact = row.log_at(k);
      break;
    case TailKind::upper_tail: {
      double acc = kNegInf;
      for (long long j = row.k_max(); j >= k; --j) acc = log_add(acc, row.log_at(j));
      log_exact = acc;
      break;
    }
    case TailKind::lower_tail: {
      double acc = kNegInf;
      for (long long j = row.k_min; j <= k; ++j) acc = log_add(acc, row.log_at(j));
      log_exact = acc;
      break;
    }
  }

  return {n, beta, kind, log_asym, log_exact, std::exp(log_exact - log_asym)};
}

}  // namespace

LdEstimate ld_point(const CumulantProfile& profile, const RowLaw& row, double beta) {
  return make_estimate(profile, row, beta, TailKind::point);
}
LdEstimate ld_upper(const CumulantProfile& profile, const RowLaw& row, double beta) {
  return make_estimate(profile, row, beta, TailKind::upper_tail);
}
LdEstimate ld_lower(const CumulantProfile& profile, const RowLaw& row, double beta) {
  return make_estimate(profile, row, beta, TailKind::lower_tail);
}

LdEstimate ld_point(const CumulantProfile& profile, int n, double beta, std::size_t cap) {
  return ld_point(profile, exact_pmf(profile.dist(), n, cap), beta);
}
LdEstimate ld_upper(const CumulantProfile& profile, int n, double beta, std::size_t cap) {
  return ld_upper(profile, exact_pmf(profile.dist(), n, cap), beta);
}
LdEstimate ld_lower(const CumulantProfile& profile, int n, double beta, std::size_t cap) {
  return ld_lower(profile, exact_pmf(profile.dist(), n, cap), beta);
}

}  // namespace latlab
