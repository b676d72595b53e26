#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latlab/largedev.hpp"
#include "latlab/logspace.hpp"
#include "test_util.hpp"

using namespace latlab;
using latlab::test::bernoulli;

TEST_CASE("point asymptotics at the paper's example") {
  CumulantProfile p(bernoulli());
  auto e = ld_point(p, 100, 0.6);
  CHECK(std::exp(e.log_exact) == doctest::Approx(0.010844).epsilon(1e-4));
  CHECK(std::exp(e.log_asymptotic) == doctest::Approx(0.010875).epsilon(1e-4));
  CHECK(e.ratio == doctest::Approx(0.997).epsilon(2e-3));
}

TEST_CASE("point asymptotics at the mean is the local CLT value") {
  CumulantProfile p(bernoulli());
  auto e = ld_point(p, 100, 0.5);
  double clt = 1.0 / std::sqrt(2 * M_PI * p.psi_d2(0.0) * 100);
  CHECK(std::exp(e.log_asymptotic) == doctest::Approx(clt).epsilon(1e-12));
}

TEST_CASE("point ratio approaches 1") {
  CumulantProfile p(bernoulli());
  double prev = 1e9;
  for (int n : {50, 100, 200, 400, 800}) {
    long long k = std::llround(n * 0.6);
    auto e = ld_point(p, n, static_cast<double>(k) / n);
    CHECK(std::abs(e.ratio - 1.0) < prev);
    prev = std::abs(e.ratio - 1.0);
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("upper tail example and structure") {
  CumulantProfile p(bernoulli());
  auto up = ld_upper(p, 100, 0.6);
  auto pt = ld_point(p, 100, 0.6);
  // Part 2 / Part 1 asymptotic ratio is the geometric factor 1/(1-e^{-alpha h})
  double t = p.rate(0.6).tilt;
  CHECK(t == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(std::exp(up.log_asymptotic - pt.log_asymptotic) ==
        doctest::Approx(1.0 / (1.0 - std::exp(-t))).epsilon(1e-12));
  CHECK(1.0 / (1.0 - std::exp(-t)) == doctest::Approx(3.0).epsilon(1e-12));
  // the exact tail is the binomial upper tail
  double tail = 0.0;
  auto row = exact_pmf(bernoulli(), 100);
  for (long long k = 60; k <= 100; ++k) tail += std::exp(row.log_at(k));
  CHECK(std::exp(up.log_exact) == doctest::Approx(tail).epsilon(1e-12));
  // the first-order prefactor converges slowly near the mean; at this beta
  // the true n=100 ratio is ~0.872 (exact binomial), improving with n
  CHECK(up.ratio == doctest::Approx(0.872).epsilon(1e-2));
  auto up4 = ld_upper(p, 400, 0.6);
  CHECK(std::abs(up4.ratio - 1.0) < std::abs(up.ratio - 1.0));
}

TEST_CASE("lower tail symmetry for the fair coin") {
  CumulantProfile p(bernoulli());
  for (double beta : {0.55, 0.65, 0.7}) {
    auto up = ld_upper(p, 100, beta);
    auto lo = ld_lower(p, 100, 1.0 - beta);
    CHECK(std::abs(up.log_exact - lo.log_exact) < 1e-12);
    CHECK(std::abs(up.log_asymptotic - lo.log_asymptotic) < 1e-10);
  }
}

TEST_CASE("domain checks") {
  CumulantProfile p(bernoulli());
  CHECK_THROWS_AS(ld_point(p, 100, 0.6004), OffLattice);
  CHECK_THROWS_AS(ld_upper(p, 100, 0.4), OutOfRange);   // wrong side of beta_0
  CHECK_THROWS_AS(ld_lower(p, 100, 0.6), OutOfRange);
  CHECK_THROWS_AS(ld_point(p, 100, 1.2), OutOfRange);
  // snapping within 1e-9 accepted
  auto e = ld_point(p, 100, 0.6 + 4e-12);
  CHECK(e.beta == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("geometric-sum consistency of Part 2") {
  CumulantProfile p(bernoulli());
  double prev = 1e9;
  for (int n : {100, 200, 400}) {
    auto up = ld_upper(p, n, 0.65);
    double acc = kNegInf;
    for (int j = 0; j < n / 5; ++j) {
      double beta = 0.65 + static_cast<double>(j) / n;
      if (beta >= 1.0) break;
      acc = log_add(acc, ld_point(p, n, beta).log_asymptotic);
    }
    double rel = std::abs(std::exp(acc - up.log_asymptotic) - 1.0);
    CHECK(rel < prev);
    prev = rel;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("asymptotic and exact tails are monotone in beta") {
  CumulantProfile p(bernoulli());
  int n = 200;
  double prev_asym = 0.0, prev_exact = 0.0;
  bool first = true;
  for (long long k = 110; k <= 180; k += 2) {
    auto e = ld_upper(p, n, static_cast<double>(k) / n);
    if (!first) {
      CHECK(e.log_asymptotic < prev_asym);
      CHECK(e.log_exact < prev_exact);
    }
    prev_asym = e.log_asymptotic;
    prev_exact = e.log_exact;
    first = false;
  }
}

TEST_CASE("tilt transport of point estimates") {
  auto d = bernoulli();
  CumulantProfile p(d);
  double t0 = 0.7;
  CumulantProfile tp(tilt(d, t0));
  int n = 60;
  for (double beta : {0.6, 0.7, 0.8}) {
    auto base = ld_point(p, n, beta);
    auto tilted = ld_point(tp, n, beta);
    double expected = t0 * n * beta - p.psi(t0) * n + base.log_exact;
    CHECK(tilted.log_exact == doctest::Approx(expected).epsilon(1e-10));
  }
}
