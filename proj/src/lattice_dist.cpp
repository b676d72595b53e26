#include "latlab/lattice_dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latlab/extfloat.hpp"
#include "latlab/logspace.hpp"

namespace latlab {

namespace {

long long checked_ll(__int128 v, const char* what) {
  if (v > static_cast<__int128>(9'000'000'000'000'000'000LL) ||
      v < -static_cast<__int128>(9'000'000'000'000'000'000LL)) {
    throw NotLattice(std::string("integer overflow while detecting span (") + what + ")");
  }
  return static_cast<long long>(v);
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long p = std::stoll(text.substr(0, slash));
    long long q = std::stoll(text.substr(slash + 1));
    if (q == 0) throw NotLattice("rational with zero denominator: " + text);
    if (q < 0) { p = -p; q = -q; }
    long long g = std::gcd(std::abs(p), q);
    if (g > 1) { p /= g; q /= g; }
    return {p, q};
  }
  return from_double(std::stod(text));
}

Rational Rational::from_double(double x, long long max_den, double tol) {
  if (!std::isfinite(x)) throw NotLattice("non-finite atom value");
  double target_tol = tol * std::max(1.0, std::abs(x));
  // Continued fraction expansion.
  long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  for (int it = 0; it < 64; ++it) {
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= target_tol) {
      return {p1, q1};
    }
    if (frac == 0.0) break;
    double inv = 1.0 / frac;
    long long a = static_cast<long long>(std::floor(inv));
    frac = inv - std::floor(inv);
    __int128 p2 = static_cast<__int128>(a) * p1 + p0;
    __int128 q2 = static_cast<__int128>(a) * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1;
    p1 = checked_ll(p2, "numerator");
    q1 = checked_ll(q2, "denominator");
  }
  if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= target_tol) {
    return {p1, q1};
  }
  throw NotLattice("atom value has no rational representation within tolerance");
}

LatticeDistribution::LatticeDistribution(double h, double offset, std::vector<Atom> atoms)
    : h_(h), offset_(offset), atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.k < b.k; });
  if (atoms_.size() < 2) throw DegenerateDistribution("at least 2 atoms required");
  if (!(h_ > 0)) throw NotLattice("span must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].prob > 0)) throw NotLattice("atom probabilities must be strictly positive");
    if (i > 0 && atoms_[i].k == atoms_[i - 1].k) throw NotLattice("duplicate atom value");
    sum += atoms_[i].prob;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw NotLattice("atom probabilities must sum to 1");
  for (auto& a : atoms_) a.log_prob = std::log(a.prob);
}

LatticeDistribution LatticeDistribution::detect_span(
    const std::vector<std::pair<Rational, double>>& atoms) {
  if (atoms.size() < 2) throw DegenerateDistribution("at least 2 atoms required");

  // Common denominator L, then gcd of the scaled value differences.
  long long L = 1;
  for (const auto& [r, p] : atoms) {
    long long g = std::gcd(L, r.den);
    L = checked_ll(static_cast<__int128>(L / g) * r.den, "common denominator");
  }
  std::vector<long long> m(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    m[i] = checked_ll(static_cast<__int128>(atoms[i].first.num) * (L / atoms[i].first.den),
                      "scaled value");
  }
  long long g = 0;
  for (std::size_t i = 1; i < m.size(); ++i) g = std::gcd(g, std::abs(m[i] - m[0]));
  if (g == 0) throw DegenerateDistribution("all atom values coincide");

  long long r0 = ((m[0] % g) + g) % g;
  double h = static_cast<double>(g) / static_cast<double>(L);
  double offset = static_cast<double>(r0) / static_cast<double>(L);

  std::vector<Atom> out(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    out[i].k = (m[i] - r0) / g;
    out[i].prob = atoms[i].second;
  }
  return LatticeDistribution(h, offset, std::move(out));
}

LatticeDistribution LatticeDistribution::detect_span(
    const std::vector<std::pair<double, double>>& atoms) {
  std::vector<std::pair<Rational, double>> rat;
  rat.reserve(atoms.size());
  for (const auto& [v, p] : atoms) rat.emplace_back(Rational::from_double(v), p);
  return detect_span(rat);
}

double LatticeDistribution::mean() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.prob * static_cast<double>(a.k) * h_;
  return s;
}

double LatticeDistribution::variance() const {
  double mu = mean();
  double s = 0.0;
  for (const auto& a : atoms_) {
    double d = static_cast<double>(a.k) * h_ - mu;
    s += a.prob * d * d;
  }
  return s;
}

double RowLaw::log_at(long long k) const {
  long long j = k - k_min;
  if (j < 0 || j >= static_cast<long long>(log_pmf.size())) return kNegInf;
  return log_pmf[static_cast<std::size_t>(j)];
}

double RowLaw::mean() const {
  KahanSum s;
  for (std::size_t j = 0; j < log_pmf.size(); ++j) {
    s.add(std::exp(log_pmf[j]) * static_cast<double>(k_min + static_cast<long long>(j)) * h);
  }
  return s.value();
}

double RowLaw::variance() const {
  double mu = mean();
  KahanSum s;
  for (std::size_t j = 0; j < log_pmf.size(); ++j) {
    double d = static_cast<double>(k_min + static_cast<long long>(j)) * h - mu;
    s.add(std::exp(log_pmf[j]) * d * d);
  }
  return s.value();
}

namespace {

// Dense extended-range pmf with a lattice origin.
struct ExtVec {
  long long k_min = 0;
  std::vector<ExtReal> v;
};

ExtVec ext_convolve(const ExtVec& a, const ExtVec& b) {
  ExtVec out;
  out.k_min = a.k_min + b.k_min;
  out.v.assign(a.v.size() + b.v.size() - 1, ExtReal{});
  std::vector<ExtReal> buf;
  for (std::size_t j = 0; j < out.v.size(); ++j) {
    buf.clear();
    std::size_t i_lo = j >= b.v.size() - 1 ? j - (b.v.size() - 1) : 0;
    std::size_t i_hi = std::min(j, a.v.size() - 1);
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
      if (a.v[i].zero() || b.v[j - i].zero()) continue;
      buf.push_back(a.v[i] * b.v[j - i]);
    }
    out.v[j] = pairwise_sum(std::span<ExtReal>(buf));
  }
  return out;
}

}  // namespace

RowLaw exact_pmf(const LatticeDistribution& d, int n, std::size_t cap) {
  if (n < 1) throw OutOfRange("exact_pmf requires n >= 1");
  long long width = d.k_max() - d.k_min();
  unsigned long long points = static_cast<unsigned long long>(width) * n + 1;
  if (points > cap) throw CapExceeded("row law support exceeds cap");

  ExtVec base;
  base.k_min = d.k_min();
  base.v.assign(static_cast<std::size_t>(width) + 1, ExtReal{});
  for (const auto& a : d.atoms()) {
    base.v[static_cast<std::size_t>(a.k - d.k_min())] = ExtReal::from_double(a.prob);
  }

  // Binary exponentiation of the pmf polynomial.
  ExtVec acc;
  bool have_acc = false;
  int e = n;
  while (e > 0) {
    if (e & 1) {
      acc = have_acc ? ext_convolve(acc, base) : base;
      have_acc = true;
    }
    e >>= 1;
    if (e > 0) base = ext_convolve(base, base);
  }

  RowLaw row;
  row.n = n;
  row.h = d.span();
  row.k_min = acc.k_min;
  row.log_pmf.resize(acc.v.size());
  for (std::size_t j = 0; j < acc.v.size(); ++j) row.log_pmf[j] = acc.v[j].log();
  return row;
}

RowLaw convolve_step(const RowLaw& row, const LatticeDistribution& d, std::size_t cap) {
  long long width = d.k_max() - d.k_min();
  if (row.log_pmf.size() + static_cast<std::size_t>(width) > cap) {
    throw CapExceeded("row law support exceeds cap");
  }
  RowLaw out;
  out.n = row.n + 1;
  out.h = row.h;
  out.k_min = row.k_min + d.k_min();
  out.log_pmf.assign(row.log_pmf.size() + static_cast<std::size_t>(width), kNegInf);
  for (const auto& a : d.atoms()) {
    long long shift = a.k - d.k_min();
    for (std::size_t j = 0; j < row.log_pmf.size(); ++j) {
      if (row.log_pmf[j] == kNegInf) continue;
      std::size_t jj = j + static_cast<std::size_t>(shift);
      out.log_pmf[jj] = log_add(out.log_pmf[jj], a.log_prob + row.log_pmf[j]);
    }
  }
  return out;
}

AliasTable::AliasTable(const RowLaw& row) : k_min_(row.k_min) {
  const std::size_t n = row.log_pmf.size();
  std::vector<double> p(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = std::exp(row.log_pmf[j]);
    sum += p[j];
  }
  threshold_.assign(n, 1.0);
  alias_.assign(n, 0);
  std::vector<std::uint32_t> small, large;
  std::vector<double> scaled(n);
  for (std::size_t j = 0; j < n; ++j) {
    scaled[j] = p[j] / sum * static_cast<double>(n);
    (scaled[j] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(j));
  }
  while (!small.empty() && !large.empty()) {
    std::uint32_t s = small.back(); small.pop_back();
    std::uint32_t l = large.back(); large.pop_back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // Leftovers are numerically 1.
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0xA0761D6478BD642FULL * (index + 1));
  (void)splitmix64(s);
  return s;
}

long long AliasTable::sample(std::uint64_t& state) const {
  const std::size_t n = threshold_.size();
  double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  double scaled = u * static_cast<double>(n);
  std::size_t j = std::min(static_cast<std::size_t>(scaled), n - 1);
  double frac = scaled - static_cast<double>(j);
  if (frac >= threshold_[j]) j = alias_[j];
  return k_min_ + static_cast<long long>(j);
}

std::vector<long long> sample_sn(const LatticeDistribution& d, int n,
                                 std::size_t count, std::uint64_t seed,
                                 std::size_t cap) {
  RowLaw row = exact_pmf(d, n, cap);
  AliasTable table(row);
  std::uint64_t state = stream_seed(seed, 0);
  std::vector<long long> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = table.sample(state);
  return out;
}

}  // namespace latlab
