#include "latlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "latlab/largedev.hpp"
#include "latlab/montecarlo.hpp"
#include "latlab/rowarray.hpp"

namespace latlab {

namespace {

struct Context {
  ExperimentConfig cfg;
  LatticeDistribution dist;
  CumulantProfile profile;
  Scheme scheme;

  explicit Context(const ExperimentConfig& c)
      : cfg(c),
        dist(c.make_distribution()),
        profile(dist),
        scheme(CumulantProfile(dist), c.lambda, c.n_max) {}

  double tau_for(double delta) const {
    return cfg.tau_auto ? SemiStableLaw::default_tau(delta, dist.span()) : cfg.tau;
  }

  SemiStableLaw law(double delta) const {
    return SemiStableLaw(scheme.alpha(), delta, dist.span(), tau_for(delta));
  }
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_csv(const Context& ctx, const std::string& out_dir,
                       const std::string& name) {
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir + "/" + name);
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(ctx.cfg.hash()));
  out << "# config_hash=" << hash << ", h=" << num(ctx.dist.span())
      << ", alpha=" << num(ctx.scheme.alpha())
      << ", lambda1=" << num(ctx.profile.lambda1())
      << ", lambda2=" << num(ctx.profile.lambda2()) << "\n";
  return out;
}

void echo_config(const Context& ctx, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir + "/effective_config.json");
  out << ctx.cfg.to_json_text() << "\n";
}

std::vector<double> make_u_grid(const ExperimentConfig& cfg) {
  std::vector<double> us(cfg.u_grid.count);
  for (int i = 0; i < cfg.u_grid.count; ++i) {
    us[i] = cfg.u_grid.min +
            (cfg.u_grid.max - cfg.u_grid.min) * i / (cfg.u_grid.count - 1);
  }
  return us;
}

const char* case_name(ShiftCase c) {
  switch (c) {
    case ShiftCase::below: return "below";
    case ShiftCase::at: return "at";
    case ShiftCase::above: return "above";
  }
  return "?";
}

// Largest n in the Δ-subsequence for which N_n is an integer (and, when
// n_cap > 0, at most n_cap); 0 when the subsequence is empty.
int largest_feasible(const Context& ctx, double delta_target,
                     unsigned long long n_cap = 0) {
  auto ns = ctx.scheme.find_subsequence(delta_target, ctx.cfg.subsequence_epsilon,
                                        1, ctx.cfg.n_max);
  for (auto it = ns.rbegin(); it != ns.rend(); ++it) {
    const SchemeRecord& rec = ctx.scheme.at(*it);
    if (rec.N && (n_cap == 0 || *rec.N <= n_cap)) return *it;
  }
  return 0;
}

}  // namespace

void cmd_analyze(const ExperimentConfig& cfg, const std::string& out_dir,
                 std::ostream& log) {
  Context ctx(cfg);
  echo_config(ctx, out_dir);
  auto out = open_csv(ctx, out_dir, "analyze.csv");

  const double alpha = ctx.scheme.alpha();
  log << "h=" << num(ctx.dist.span()) << "\n"
      << "beta0=" << num(ctx.profile.beta_mean()) << "\n"
      << "lambda1=" << num(ctx.profile.lambda1()) << "\n"
      << "lambda2=" << num(ctx.profile.lambda2()) << "\n"
      << "alpha=" << num(alpha) << "\n"
      << "psi_d1_alpha=" << num(ctx.profile.psi_d1(alpha)) << "\n"
      << "psi_d2_alpha=" << num(ctx.profile.psi_d2(alpha)) << "\n";

  out << "n,valid,log_N,c,b,delta,shift_case,log_A\n";
  for (const auto& rec : ctx.scheme.records()) {
    out << rec.n << ',' << (rec.valid ? 1 : 0) << ',' << num(rec.log_N) << ','
        << num(rec.c) << ',' << num(rec.b) << ',' << num(rec.delta) << ','
        << case_name(rec.shift_case) << ',' << num(rec.log_A) << "\n";
  }
}

void cmd_verify_conditions(const ExperimentConfig& cfg, const std::string& out_dir,
                           std::ostream& log) {
  Context ctx(cfg);
  echo_config(ctx, out_dir);
  auto out = open_csv(ctx, out_dir, "conditions.csv");
  out << "delta_target,n,delta_n,tau,tail,tail_limit,trunc_mean_centered,"
         "shift_limit,trunc_second,trunc_var\n";

  for (double target : cfg.delta_targets) {
    auto ns = ctx.scheme.find_subsequence(target, cfg.subsequence_epsilon, 1,
                                          cfg.n_max);
    if (ns.empty()) {
      out << "# warning: empty subsequence for delta_target=" << num(target) << "\n";
      log << "warning: empty subsequence for delta_target=" << num(target) << "\n";
      continue;
    }
    double tau = ctx.tau_for(target);
    auto rows = condition_table(ctx.dist, ctx.scheme, tau, ns);
    for (const auto& r : rows) {
      out << num(target) << ',' << r.moments.n << ',' << num(r.moments.delta_n)
          << ',' << num(tau) << ',' << num(r.moments.tail) << ','
          << num(r.tail_limit) << ',' << num(r.moments.trunc_mean_centered) << ','
          << num(r.shift_limit) << ',' << num(r.moments.trunc_second) << ','
          << num(r.moments.trunc_var) << "\n";
    }
  }
}

void cmd_compare_cf(const ExperimentConfig& cfg, const std::string& out_dir,
                    std::ostream& log) {
  Context ctx(cfg);
  echo_config(ctx, out_dir);
  auto out = open_csv(ctx, out_dir, "compare_cf.csv");
  out << "delta_target,n,u,re_exact,im_exact,re_limit,im_limit,abs_diff\n";

  std::vector<double> us = make_u_grid(cfg);
  for (double target : cfg.delta_targets) {
    int n = largest_feasible(ctx, target);
    if (n == 0) {
      out << "# warning: empty subsequence for delta_target=" << num(target) << "\n";
      log << "warning: empty subsequence for delta_target=" << num(target) << "\n";
      continue;
    }
    const SchemeRecord& rec = ctx.scheme.at(n);
    auto exact = exact_normalized_cf(ctx.dist, ctx.scheme, n, us);
    SemiStableLaw law(ctx.scheme.alpha(), rec.delta, ctx.dist.span());
    double sup = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
      auto limit = law.cf(us[i]);
      double diff = std::abs(exact[i] - limit);
      sup = std::max(sup, diff);
      out << num(target) << ',' << n << ',' << num(us[i]) << ','
          << num(exact[i].real()) << ',' << num(exact[i].imag()) << ','
          << num(limit.real()) << ',' << num(limit.imag()) << ',' << num(diff)
          << "\n";
    }
    out << "# sup_diff delta_target=" << num(target) << " n=" << n << " "
        << num(sup) << "\n";
    log << "delta_target=" << num(target) << " n=" << n
        << " sup|phi_n-phi|=" << num(sup) << "\n";
  }
}

void cmd_largedev(const ExperimentConfig& cfg, const std::string& out_dir,
                  std::ostream& log) {
  Context ctx(cfg);
  echo_config(ctx, out_dir);
  auto out = open_csv(ctx, out_dir, "largedev.csv");
  out << "kind,n,beta,log_exact,log_asymptotic,ratio\n";

  const double h = ctx.dist.span();
  const double b0 = ctx.profile.beta_mean();
  std::vector<int> ns;
  for (int n : {cfg.n_max / 4, cfg.n_max / 2, cfg.n_max}) {
    if (n >= 1 && (ns.empty() || n != ns.back())) ns.push_back(n);
  }

  auto emit = [&](const LdEstimate& e, const char* kind) {
    out << kind << ',' << e.n << ',' << num(e.beta) << ',' << num(e.log_exact)
        << ',' << num(e.log_asymptotic) << ',' << num(e.ratio) << "\n";
  };
  for (int n : ns) {
    RowLaw row = exact_pmf(ctx.dist, n);
    for (int j = 1; j <= 5; ++j) {
      double beta_up = b0 + j * (ctx.profile.beta_max() - b0) / 7.0;
      long long k = std::llround(n * beta_up / h);
      beta_up = static_cast<double>(k) * h / n;
      if (beta_up > b0 && beta_up < ctx.profile.beta_max()) {
        emit(ld_point(ctx.profile, row, beta_up), "point");
        emit(ld_upper(ctx.profile, row, beta_up), "upper");
      }
      double beta_lo = b0 - j * (b0 - ctx.profile.beta_min()) / 7.0;
      k = std::llround(n * beta_lo / h);
      beta_lo = static_cast<double>(k) * h / n;
      if (beta_lo < b0 && beta_lo > ctx.profile.beta_min()) {
        emit(ld_lower(ctx.profile, row, beta_lo), "lower");
      }
    }
  }
  log << "largedev table written for n in {";
  for (std::size_t i = 0; i < ns.size(); ++i) log << (i ? "," : "") << ns[i];
  log << "}\n";
}

void cmd_limit(const ExperimentConfig& cfg, const std::string& out_dir,
               std::ostream& log) {
  Context ctx(cfg);
  echo_config(ctx, out_dir);
  auto cf_out = open_csv(ctx, out_dir, "limit_cf.csv");
  auto cdf_out = open_csv(ctx, out_dir, "limit_cdf.csv");
  cf_out << "delta,u,re,im\n";
  cdf_out << "delta,x,cdf,error_bound\n";

  std::vector<double> us = make_u_grid(cfg);
  for (double target : cfg.delta_targets) {
    SemiStableLaw law = ctx.law(target);
    for (double u : us) {
      auto phi = law.cf(u);
      cf_out << num(target) << ',' << num(u) << ',' << num(phi.real()) << ','
             << num(phi.imag()) << "\n";
    }
    const int points = 101;
    const double span = std::asinh(20.0);
    law.prepare_cdf(20.0);
    for (int i = 0; i < points; ++i) {
      double x = std::sinh(-span + 2.0 * span * i / (points - 1));
      auto f = law.cdf_with_error(x);
      cdf_out << num(target) << ',' << num(x) << ',' << num(f.value) << ','
              << num(f.error) << "\n";
    }
    log << "delta=" << num(target) << " shift_C=" << num(law.shift())
        << " cdf_error_bound=" << num(law.cdf_error_bound()) << "\n";
  }
}

void cmd_sample(const ExperimentConfig& cfg, const std::string& out_dir,
                std::ostream& log) {
  Context ctx(cfg);
  echo_config(ctx, out_dir);
  auto out = open_csv(ctx, out_dir, "samples.csv");

  int n = cfg.mc.n;
  if (n == 0) {
    n = largest_feasible(ctx, cfg.delta_targets.front(), cfg.mc.cap);
    if (n == 0) throw OutOfRange("no feasible n in the first delta subsequence");
  }
  McRun run = sample_zn(ctx.dist, ctx.scheme, n, cfg.mc.replicates, cfg.mc.seed,
                        cfg.mc.cap);
  out << "replicate,value\n";
  for (std::size_t r = 0; r < run.samples.size(); ++r) {
    out << r << ',' << num(run.samples[r]) << "\n";
  }
  out << "# n=" << n << " replicates=" << run.replicates
      << " ks_distance=" << num(run.ks_distance)
      << " cdf_error=" << num(run.cdf_error) << "\n";
  log << "n=" << n << " ks_distance=" << num(run.ks_distance)
      << " cdf_error=" << num(run.cdf_error) << "\n";
}

}  // namespace latlab
