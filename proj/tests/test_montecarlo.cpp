#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "archinf/model_io.hpp"
#include "archinf/montecarlo.hpp"
#include "archinf/rng.hpp"

using namespace archinf;

namespace {

MCConfig zero_config() {
  MCConfig cfg;
  cfg.spec.family = Family::Zero;
  cfg.theta0.omega = 1.5;
  cfg.theta0.mu = 0.25;
  cfg.theta0.bounds.lo = {0.01, -5.0};
  cfg.theta0.bounds.hi = {20.0, 5.0};
  cfg.gamma = 0.5;
  cfg.replications = 200;
  cfg.sample_sizes = {2000, 8000};
  cfg.seed = 99;
  cfg.n_weights = 10;
  cfg.burn_in = 0;
  cfg.threads = 2;
  return cfg;
}

MCConfig gexp_config() {
  MCConfig cfg;
  cfg.spec.family = Family::Gexp;
  cfg.spec.m = 1;
  cfg.spec.fixed_f = {0.0};
  cfg.theta0.omega = 0.2;
  cfg.theta0.mu = 0.0;
  cfg.theta0.zeta = {0.5, 0.7};
  cfg.theta0.bounds.lo = {0.01, -0.5, 0.02, 0.05};
  cfg.theta0.bounds.hi = {3.0, 0.5, 3.0, 3.0};
  cfg.gamma = 0.5;
  cfg.replications = 50;
  cfg.sample_sizes = {400};
  cfg.seed = 11;
  cfg.n_weights = 1000;
  cfg.burn_in = 2000;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("zero family: unbiased mean and root-T error decay") {
  MCConfig cfg = zero_config();
  MCReport rep = run_mc(cfg);
  REQUIRE(rep.by_size.size() == 2);
  const auto& small = rep.by_size[0];
  const auto& big = rep.by_size[1];
  CHECK(small.frac_converged > 0.99);
  CHECK(big.frac_converged > 0.99);

  const auto& mu_big = big.coords[1];
  CHECK(std::abs(mu_big.bias) <= 3.0 * mu_big.bias_mcse);
  const double ratio = big.coords[1].rmse / small.coords[1].rmse;
  CHECK(ratio >= 0.40);
  CHECK(ratio <= 0.60);
  const double ratio_omega = big.coords[0].rmse / small.coords[0].rmse;
  CHECK(ratio_omega >= 0.40);
  CHECK(ratio_omega <= 0.60);

  for (const auto& sr : rep.by_size)
    for (const auto& c : sr.coords) {
      CHECK(c.coverage >= 0.0);
      CHECK(c.coverage <= 1.0);
      CHECK(std::isfinite(c.ad_stat));
    }
  CHECK(rep.moment_check.has_value());
}

TEST_CASE("gexp smoke study populates coverage fields") {
  MCConfig cfg = gexp_config();
  MCReport rep = run_mc(cfg);
  REQUIRE(rep.by_size.size() == 1);
  const auto& sr = rep.by_size[0];
  CHECK(sr.n_converged > 25);
  CHECK(sr.n_sandwich_ok > 0);
  for (const auto& c : sr.coords) {
    CHECK(c.coverage > 0.5);
    CHECK(c.coverage <= 1.0);
  }
}

TEST_CASE("report is deterministic and independent of the thread count") {
  MCConfig cfg = gexp_config();
  cfg.threads = 1;
  MCReport a = run_mc(cfg);
  cfg.threads = 2;
  MCReport b = run_mc(cfg);
  MCReport c = run_mc(cfg);
  const auto ja = mc_report_to_json(a, cfg).dump();
  const auto jb = mc_report_to_json(b, cfg).dump();
  const auto jc = mc_report_to_json(c, cfg).dump();
  CHECK(ja == jb);
  CHECK(jb == jc);
}

TEST_CASE("replication seeds are pairwise distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 1000; ++r)
    for (std::uint64_t t : {500ULL, 1000ULL, 2000ULL})
      seen.insert(mix_seed(424242, r, t));
  CHECK(seen.size() == 3000);
}

TEST_CASE("config validation") {
  MCConfig cfg = zero_config();
  cfg.replications = 10;
  CHECK_THROWS_AS(run_mc(cfg), std::domain_error);
  cfg = zero_config();
  cfg.sample_sizes = {15};  // below 10 * (r+2) = 40
  CHECK_THROWS_AS(run_mc(cfg), std::domain_error);
}

TEST_CASE("anderson-darling statistic behaves") {
  // Standard-normal draws pass, a shifted sample fails.
  Rng rng(7);
  std::vector<double> z(500), shifted(500);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = rng.normal();
    shifted[i] = z[i] + 1.0;
  }
  CHECK(anderson_darling_normal(z) < kAd1PercentCritical);
  CHECK(anderson_darling_normal(shifted) > kAd1PercentCritical);
}

TEST_CASE("gaussian identity check shrinks with T and flags laplace") {
  MCConfig cfg = gexp_config();
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const double small =
        gaussian_identity_check(cfg.spec, cfg.theta0, 1000, 3, seed, 0.5, 1000, 2);
    const double big =
        gaussian_identity_check(cfg.spec, cfg.theta0, 4000, 3, seed, 0.5, 1000, 2);
    CHECK(big < small);
  }
  const double laplace =
      gaussian_identity_check(cfg.spec, cfg.theta0, 20000, 3, 5, 1.0, 1000, 2);
  const double gauss =
      gaussian_identity_check(cfg.spec, cfg.theta0, 20000, 3, 5, 0.5, 1000, 2);
  CHECK(laplace > 0.3);
  CHECK(gauss < laplace);
}
