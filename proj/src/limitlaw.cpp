#include "latlab/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "latlab/logspace.hpp"

namespace latlab {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

void check_tau(double delta, double h, double tau) {
  if (!(tau > 0)) throw OutOfRange("tau must be positive");
  double q = (std::log(tau) + delta) / h;
  if (std::abs(q - std::round(q)) < 1e-12) {
    throw TauOnLattice("tau lies on the geometric support e^{hZ-delta}");
  }
}

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlX[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGlW[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

}  // namespace

double SemiStableLaw::default_tau(double delta, double h) {
  return std::exp(0.5 * h - delta);
}

double SemiStableLaw::theta(double delta, double h, double tau) {
  check_tau(delta, h, tau);
  return entire_h(delta + std::log(tau), h) - delta;
}

double SemiStableLaw::shift_constant(double alpha, double delta, double h, double tau) {
  check_tau(delta, h, tau);
  if (std::abs(alpha - 1.0) < 1e-12) {
    return entire_h(std::log(tau) + delta, h) / h;
  }
  double th = theta(delta, h, tau);
  return std::exp(-(alpha - 1.0) * th) / (1.0 - std::exp((alpha - 1.0) * h));
}

SemiStableLaw::SemiStableLaw(double alpha, double delta, double h, double tau)
    : alpha_(alpha), delta_(delta), h_(h), tau_(tau) {
  if (!(alpha > 0 && alpha < 2)) throw OutOfRange("alpha outside (0, 2)");
  if (!(h > 0)) throw OutOfRange("span h must be positive");
  if (!(delta >= 0 && delta <= h)) throw OutOfRange("delta outside [0, h]");
  check_tau(delta_, h_, tau_);
  theta_ = theta(delta_, h_, tau_);
  shift_ = shift_constant(alpha_, delta_, h_, tau_);
}

SemiStableLaw::SemiStableLaw(double alpha, double delta, double h)
    : SemiStableLaw(alpha, delta, h, default_tau(delta, h)) {}

double SemiStableLaw::levy_tail(double tau_prime) const {
  check_tau(delta_, h_, tau_prime);
  double th = entire_h(delta_ + std::log(tau_prime), h_) - delta_;
  return std::exp(-alpha_ * (th + h_)) / (1.0 - std::exp(-alpha_ * h_));
}

std::complex<double> SemiStableLaw::log_cf_truncated(double u, long long k_hi) const {
  if (u == 0.0) return {0.0, 0.0};
  const double tol = 1e-12 * (1.0 + u * u);
  const double log_tau = std::log(tau_);

  // Large-x side: |e^{iux} - 1| <= 2, tail of Σ 2 x^{-α}.
  double rhs_hi = 0.25 * tol * (1.0 - std::exp(-alpha_ * h_)) * std::exp(-alpha_ * delta_);
  long long k1 = static_cast<long long>(std::ceil(-std::log(rhs_hi) / (alpha_ * h_))) ;
  k1 = std::min(k1, k_hi);

  // Small-x side: |e^{iux} - 1 - iux| <= u²x²/2, tail of Σ (u²/2) x^{2-α}.
  double gamma = 2.0 - alpha_;
  double rhs_lo = tol * (1.0 - std::exp(-gamma * h_)) * std::exp(gamma * delta_) / (u * u);
  long long k2 = static_cast<long long>(std::ceil(-std::log(rhs_lo) / (gamma * h_)));
  k2 = std::max<long long>(k2, 1);

  KahanSum re, im;
  for (long long k = -k2; k <= k1; ++k) {
    double lx = h_ * static_cast<double>(k) - delta_;
    double x = std::exp(lx);
    double weight = std::exp(-alpha_ * lx);
    double phase = u * x;
    double s = std::sin(0.5 * phase);
    re.add(-2.0 * s * s * weight);
    double im_term = std::sin(phase);
    if (lx < log_tau) im_term -= phase;  // compensation below τ
    im.add(im_term * weight);
  }
  return {re.value(), shift_ * u + im.value()};
}

std::complex<double> SemiStableLaw::log_cf(double u) const {
  return log_cf_truncated(u, std::numeric_limits<long long>::max());
}

double SemiStableLaw::semistability_defect(std::span<const double> u_grid, double a) const {
  double worst = 0.0;
  for (double u : u_grid) {
    double lhs = std::exp(a * log_cf(u).real());
    double rhs = std::exp(log_cf(std::exp(h_) * u).real());
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double SemiStableLaw::semistability_defect(std::span<const double> u_grid) const {
  return semistability_defect(u_grid, std::exp(alpha_ * h_));
}

// ---------------------------------------------------------------------------
// CDF evaluation.
//
// The law is split at a lattice gap above the evaluation window: X = Y + Z,
// Y keeping jumps below the split (bounded frequencies, Gil-Pelaez invertible
// with a shared quadrature grid) and Z the compound-Poisson sum of the rare
// large jumps.  F(x) = Σ_configs P[Z = z] F_Y(x - z), where the configs are
// the finitely many large-jump multisets with non-negligible probability.
// ---------------------------------------------------------------------------

class CdfEvaluator {
 public:
  CdfEvaluator(const SemiStableLaw& law, double x_hi_hint) : law_(law) {
    const double h = law.h(), alpha = law.alpha(), delta = law.delta();
    x_hi_ = std::max(64.0, x_hi_hint);

    double big_thresh = std::max({4.0 * law.tau(), 2.0 * x_hi_, 16.0});
    k_split_ = static_cast<long long>(std::floor((std::log(big_thresh) + delta) / h)) + 1;
    lambda_big_ = std::exp(-alpha * (h * static_cast<double>(k_split_) - delta)) /
                  (1.0 - std::exp(-alpha * h));
    max_jump_y_ = std::exp(h * static_cast<double>(k_split_ - 1) - delta);

    build_configs();
    find_cutoff();
    build_nodes(panel_len_);
    choose_x_lo();
    build_table();
    estimate_quad_error();
    far_cut_ = xs_.back() + 40.0 * std::max(1.0, max_jump_y_);
  }

  SemiStableLaw::CdfValue eval(double x) const {
    const double p0 = std::exp(-lambda_big_);
    double acc = 0.0;
    double err = quad_err_ + interp_err_ + pruned_mass_;
    for (const auto& [z, w] : configs_) {
      double t = x - z;
      double fy;
      if (t < xs_.front()) {
        fy = 0.0;
        err += w * p0 * low_end_mass_;
      } else if (t <= xs_.back()) {
        fy = interp(t);
      } else if (t <= far_cut_) {
        fy = 0.5 * (1.0 + f_end_);
        err += w * p0 * 0.5 * (1.0 - f_end_);
      } else {
        fy = 1.0;
        err += 1e-12;
      }
      acc += w * fy;
    }
    double value = std::clamp(p0 * acc, 0.0, 1.0);
    return {value, err};
  }

  double table_error() const { return quad_err_ + interp_err_; }
  double x_hi() const { return x_hi_; }

 private:
  void build_configs() {
    const double h = law_.h(), alpha = law_.alpha(), delta = law_.delta();
    std::vector<std::pair<double, double>> sizes;  // (jump value, Lévy mass)
    for (long long k = k_split_;; ++k) {
      double nu = std::exp(-alpha * (h * static_cast<double>(k) - delta));
      if (nu < 1e-13) break;
      sizes.emplace_back(std::exp(h * static_cast<double>(k) - delta), nu);
    }
    configs_.assign(1, {0.0, 1.0});
    for (const auto& [x, nu] : sizes) {
      std::size_t base = configs_.size();
      for (std::size_t i = 0; i < base; ++i) {
        double w = configs_[i].second;
        double z = configs_[i].first;
        double term = 1.0;
        for (int c = 1;; ++c) {
          term *= nu / c;
          if (w * term < 1e-13) break;
          configs_.emplace_back(z + c * x, w * term);
        }
      }
    }
    double total = 0.0;
    for (const auto& [z, w] : configs_) total += w;
    pruned_mass_ = std::max(0.0, std::exp(lambda_big_) - total) * std::exp(-lambda_big_);
    std::sort(configs_.begin(), configs_.end());
  }

  std::complex<double> log_cf_y(double u) const {
    return law_.log_cf_truncated(u, k_split_ - 1);
  }

  void find_cutoff() {
    const double log_floor = std::log(1e-11);
    double u_cap = 4.0;
    for (;;) {
      bool decayed = true;
      for (double f : {0.37, 0.5, 0.67, 0.82, 1.0}) {
        if (log_cf_y(u_cap * f).real() > log_floor) {
          decayed = false;
          break;
        }
      }
      if (decayed) break;
      u_cap *= 1.4;
      if (u_cap > 2e5) {
        throw QuadratureNotConverged("characteristic function decays too slowly");
      }
    }
    u_max_ = u_cap;
    double max_freq = max_jump_y_ + std::max(x_hi_, 256.0);
    panel_len_ = std::min(0.5, 9.0 / max_freq);
  }

  void build_nodes(double panel_len) {
    nodes_u_.clear();
    coef_.clear();
    std::size_t panels = static_cast<std::size_t>(std::ceil(u_max_ / panel_len));
    nodes_u_.reserve(panels * 16);
    coef_.reserve(panels * 16);
    for (std::size_t p = 0; p < panels; ++p) {
      double a = p * panel_len;
      double b = std::min(u_max_, a + panel_len);
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int i = 0; i < 8; ++i) {
        for (double sign : {-1.0, 1.0}) {
          double u = mid + sign * half * kGlX[i];
          std::complex<double> phi = std::exp(log_cf_y(u));
          nodes_u_.push_back(u);
          coef_.push_back(half * kGlW[i] * phi / u);
        }
      }
    }
  }

  double fy_raw(double x) const {
    KahanSum s;
    for (std::size_t i = 0; i < nodes_u_.size(); ++i) {
      // Im(e^{-iux} φ(u)) = im(φ) cos(ux) - re(φ) sin(ux)
      double c = std::cos(nodes_u_[i] * x), sn = std::sin(nodes_u_[i] * x);
      s.add(coef_[i].imag() * c - coef_[i].real() * sn);
    }
    return 0.5 - s.value() / kPi;
  }

  void choose_x_lo() {
    const double h = law_.h(), alpha = law_.alpha(), delta = law_.delta();
    if (alpha < 1.0) {
      // Y is bounded below: shift minus the full compensation mass.
      long long k_tau = static_cast<long long>(
          std::floor((std::log(law_.tau()) + delta) / h));
      double s1 = std::exp((1.0 - alpha) * (h * static_cast<double>(k_tau) - delta)) /
                  (1.0 - std::exp(-(1.0 - alpha) * h));
      x_lo_ = law_.shift() - s1 - 0.5;
      low_end_mass_ = 0.0;
      return;
    }
    double x = -2.0;
    while (x > -512.0 && fy_raw(x) > 1e-8) x *= 2.0;
    x_lo_ = x;
    low_end_mass_ = std::max(0.0, fy_raw(x));
  }

  void build_table() {
    const std::size_t count = 800;
    double t_lo = std::asinh(x_lo_), t_hi = std::asinh(xs_hint_upper());
    xs_.resize(count);
    fs_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / (count - 1);
      xs_[i] = std::sinh(t);
      fs_[i] = fy_raw(xs_[i]);
    }
    // Monotone correction; the defect feeds the error estimate.
    double defect = 0.0, run = 0.0, step = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      if (fs_[i] < run) {
        defect = std::max(defect, run - fs_[i]);
        fs_[i] = run;
      }
      if (i > 0) step = std::max(step, fs_[i] - fs_[i - 1]);
      fs_[i] = std::clamp(fs_[i], 0.0, 1.0);
      run = fs_[i];
    }
    interp_err_ = 0.5 * step + defect;
    f_end_ = fs_.back();
  }

  double xs_hint_upper() const { return x_hi_; }

  void estimate_quad_error() {
    // Re-run a few probes with halved panels.
    std::vector<double> save_u = std::move(nodes_u_);
    std::vector<std::complex<double>> save_c = std::move(coef_);
    build_nodes(0.5 * panel_len_);
    double worst = 0.0;
    for (double f : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      double x = x_lo_ + f * (xs_.back() - x_lo_);
      std::size_t i = static_cast<std::size_t>(f * (xs_.size() - 1));
      worst = std::max(worst, std::abs(fy_raw(xs_[i]) - fs_[i]));
      (void)x;
    }
    nodes_u_ = std::move(save_u);
    coef_ = std::move(save_c);
    quad_err_ = worst + 1e-10;
  }

  double interp(double t) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
    if (it == xs_.begin()) return fs_.front();
    if (it == xs_.end()) return fs_.back();
    std::size_t j = static_cast<std::size_t>(it - xs_.begin());
    double w = (t - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
    return fs_[j - 1] + w * (fs_[j] - fs_[j - 1]);
  }

  const SemiStableLaw& law_;
  double x_hi_ = 0.0, x_lo_ = 0.0;
  long long k_split_ = 0;
  double lambda_big_ = 0.0, max_jump_y_ = 0.0;
  double u_max_ = 0.0, panel_len_ = 0.0;
  double quad_err_ = 0.0, interp_err_ = 0.0, pruned_mass_ = 0.0;
  double f_end_ = 1.0, low_end_mass_ = 0.0, far_cut_ = 0.0;
  std::vector<std::pair<double, double>> configs_;  // (z, Π ν^c / c!)
  std::vector<double> nodes_u_;
  std::vector<std::complex<double>> coef_;
  std::vector<double> xs_, fs_;
};

SemiStableLaw::~SemiStableLaw() = default;
SemiStableLaw::SemiStableLaw(SemiStableLaw&&) noexcept = default;
SemiStableLaw& SemiStableLaw::operator=(SemiStableLaw&&) noexcept = default;

void SemiStableLaw::prepare_cdf(double x_hi_hint) const {
  if (!cdf_ || cdf_->x_hi() < x_hi_hint) {
    cdf_ = std::make_unique<CdfEvaluator>(*this, x_hi_hint);
  }
}

SemiStableLaw::CdfValue SemiStableLaw::cdf_with_error(double x) const {
  if (!cdf_) prepare_cdf(512.0);
  return cdf_->eval(x);
}

double SemiStableLaw::cdf_error_bound() const {
  if (!cdf_) prepare_cdf(512.0);
  return cdf_->table_error();
}

}  // namespace latlab
