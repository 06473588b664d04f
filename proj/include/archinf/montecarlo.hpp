#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "archinf/fit.hpp"
#include "archinf/model.hpp"
#include "archinf/process.hpp"

namespace archinf {

struct MCConfig {
  ModelSpec spec;
  ParamVector theta0;  // truth, with the box used for fitting
  double gamma = 0.5;
  std::vector<long> sample_sizes;
  int replications = 200;
  long burn_in = -1;
  long n_weights = 10000;  // simulation truncation
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  FitOptions fit_options;
  int threads = 1;  // 0 = hardware concurrency; report identical either way
  std::vector<double> rho_grid;  // moment-condition precheck; default 0.55..0.99

  void validate() const;
};

struct CoordStats {
  std::string name;
  double bias = 0.0;
  double bias_mcse = 0.0;
  double rmse = 0.0;
  double coverage = 0.0;  // fraction of CIs covering the truth
  double ad_stat = 0.0;   // Anderson-Darling statistic of standardized errors
};

struct MCSizeReport {
  long sample_size = 0;
  long n_converged = 0;
  long n_sandwich_ok = 0;
  double frac_converged = 0.0;
  double frac_boundary = 0.0;
  // Three-sigma binomial band around the nominal level at this run's
  // replication count; coverage outside it is evidence against the CIs.
  double coverage_band_lo = 0.0;
  double coverage_band_hi = 1.0;
  std::vector<CoordStats> coords;
};

struct MCReport {
  std::optional<MomentConditionRecord> moment_check;  // best satisfied rho, if any
  std::vector<MCSizeReport> by_size;
};

// Asymptotic 1% critical value of the Anderson-Darling statistic for a fully
// specified continuous null.
inline constexpr double kAd1PercentCritical = 3.857;

// A^2 against the standard normal; z need not be sorted.
double anderson_darling_normal(std::vector<double> z);

MCReport run_mc(const MCConfig& cfg);

// Max over replications of |G_T(theta0) - 2 H_T(theta0)|_F / |H_T(theta0)|_F
// on simulated paths; near zero for Gaussian innovations (gamma = 0.5) and
// bounded away from zero otherwise.
double gaussian_identity_check(const ModelSpec& spec, const ParamVector& theta0,
                               long sample_size, int replications,
                               std::uint64_t seed, double gamma = 0.5,
                               long n_weights = 10000, int threads = 1);

}  // namespace archinf
