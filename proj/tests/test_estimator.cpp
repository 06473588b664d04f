#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "archinf/errors.hpp"
#include "archinf/fit.hpp"
#include "archinf/process.hpp"

using namespace archinf;

namespace {

ModelSpec zero_spec() {
  ModelSpec s;
  s.family = Family::Zero;
  return s;
}

ModelSpec gexp_spec() {
  ModelSpec s;
  s.family = Family::Gexp;
  s.m = 1;
  s.fixed_f = {0.0};
  return s;
}

Bounds zero_bounds() {
  Bounds b;
  b.lo = {0.01, -5.0};
  b.hi = {20.0, 5.0};
  return b;
}

Bounds gexp_bounds() {
  Bounds b;
  b.lo = {0.01, -0.5, 0.02, 0.05};
  b.hi = {3.0, 0.5, 3.0, 3.0};
  return b;
}

Series make_gexp_series(long T, std::uint64_t seed) {
  SimConfig cfg;
  cfg.spec = gexp_spec();
  cfg.theta0.omega = 0.2;
  cfg.theta0.mu = 0.0;
  cfg.theta0.zeta = {0.5, 0.7};
  cfg.gamma = 0.5;
  cfg.sample_size = T;
  cfg.n_weights = 2000;
  cfg.burn_in = 4000;
  cfg.seed = seed;
  return simulate(cfg);
}

bool same_result(const FitResult& a, const FitResult& b) {
  return a.theta.flat() == b.theta.flat() && a.qll == b.qll &&
         a.converged == b.converged && a.iterations == b.iterations;
}

}  // namespace

TEST_CASE("zero family recovers the closed-form minimizer") {
  SimConfig cfg;
  cfg.spec = zero_spec();
  cfg.theta0.omega = 2.5;
  cfg.theta0.mu = 0.8;
  cfg.gamma = 0.5;
  cfg.sample_size = 3000;
  cfg.burn_in = 0;
  cfg.seed = 12;
  Series y = simulate(cfg);

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= y.size();
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= y.size();

  FitResult fr = fit(y, zero_spec(), zero_bounds());
  CHECK(fr.converged);
  CHECK(std::abs(fr.theta.mu - mean) < 1e-6);
  CHECK(std::abs(fr.theta.omega - var) < 1e-6);
  CHECK(fr.projected_grad_norm <= 1e-8);
  for (bool f : fr.boundary_flags) CHECK(!f);
}

TEST_CASE("descent from the box center and monotone in extra starts") {
  Series y = make_gexp_series(1500, 314);
  const Bounds b = gexp_bounds();

  FitOptions o1;
  o1.n_starts = 1;
  FitResult r1 = fit(y, gexp_spec(), b, o1);
  const double center_q =
      qll(gexp_spec(), ParamVector::from_flat(b.center(), b), y);
  CHECK(r1.qll <= center_q);

  FitOptions o5;
  o5.n_starts = 5;
  FitResult r5 = fit(y, gexp_spec(), b, o5);
  CHECK(r5.qll <= r1.qll + 1e-12);
}

TEST_CASE("fit is bitwise reproducible per seed") {
  Series y = make_gexp_series(800, 2718);
  FitOptions opts;
  opts.seed = 99;
  FitResult a = fit(y, gexp_spec(), gexp_bounds(), opts);
  FitResult b = fit(y, gexp_spec(), gexp_bounds(), opts);
  CHECK(same_result(a, b));
}

TEST_CASE("raising the iteration cap never hurts") {
  Series y = make_gexp_series(800, 1618);
  FitOptions lo;
  lo.max_iter = 12;
  FitOptions hi;
  hi.max_iter = 500;
  FitResult a = fit(y, gexp_spec(), gexp_bounds(), lo);
  FitResult c = fit(y, gexp_spec(), gexp_bounds(), hi);
  CHECK(c.qll <= a.qll + 1e-12);
}

TEST_CASE("too-short series is rejected") {
  Series y{0.1, -0.2, 0.3};
  CHECK_THROWS_AS(fit(y, gexp_spec(), gexp_bounds()), std::domain_error);
}

TEST_CASE("figarch box with nonpositive weights everywhere fails loudly") {
  ModelSpec spec;
  spec.family = Family::Figarch;
  spec.m = 1;
  spec.n = 1;
  Bounds b;
  // psi_1 = d + a1 - b1 < 0 on the whole box
  b.lo = {0.05, -0.1, 0.01, 0.60, 0.05};
  b.hi = {1.0, 0.1, 0.05, 0.90, 0.30};
  Series y = make_gexp_series(300, 5);
  CHECK_THROWS_AS(fit(y, spec, b), positivity_error);
}

TEST_CASE("gexp estimates land near the truth at moderate T") {
  Series y = make_gexp_series(4000, 424242);
  FitResult fr = fit(y, gexp_spec(), gexp_bounds());
  CHECK(fr.converged);
  CHECK(std::abs(fr.theta.omega - 0.2) < 0.15);
  CHECK(std::abs(fr.theta.mu - 0.0) < 0.05);
  CHECK(std::abs(fr.theta.zeta[0] - 0.5) < 0.25);
  CHECK(std::abs(fr.theta.zeta[1] - 0.7) < 0.35);
}

TEST_CASE("zero family clips the closed-form minimizer to the box") {
  SimConfig cfg;
  cfg.spec = zero_spec();
  cfg.theta0.omega = 1.0;
  cfg.theta0.mu = 3.0;
  cfg.gamma = 0.5;
  cfg.sample_size = 500;
  cfg.burn_in = 0;
  cfg.seed = 3;
  Series y = simulate(cfg);

  Bounds tight;
  tight.lo = {0.01, -1.0};
  tight.hi = {20.0, 1.0};  // sample mean ~3 is outside
  FitResult fr = fit(y, zero_spec(), tight);
  CHECK(fr.theta.mu == 1.0);
  CHECK(fr.boundary_flags[1]);
}
