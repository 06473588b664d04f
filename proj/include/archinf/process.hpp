#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "archinf/model.hpp"

namespace archinf {

struct SimConfig {
  ModelSpec spec;
  ParamVector theta0;
  double gamma = 0.5;     // innovation shape
  long sample_size = 0;   // observations returned
  long burn_in = -1;      // presample steps discarded; -1 = 10*n_weights capped at 1e5
  long n_weights = 10000; // weight truncation for the variance recursion
  std::uint64_t seed = 0;
  bool allow_nonstationary = false;  // required when sum(psi) >= 1
};

long default_burn_in(long n_weights);

// Sum of all weights (the generating function at z = 1): closed form for the
// rational families, truncated sum plus a tail estimate for the kernels.
// Values >= 1 rule out covariance stationarity.
double weight_total(const ModelSpec& spec, const std::vector<double>& zeta,
                    const std::vector<double>& psi);

// Path of y_t = mu0 + sigma_t eps_t with sigma_t^2 = omega0 + sum psi_j x_{t-j}^2,
// started from an empty presample (x_s = 0 for s <= 0). Deterministic per seed.
// Throws simulation_overflow_error if the variance leaves the double range.
Series simulate(const SimConfig& cfg);

enum class MomentVerdict { Yes, No, Inconclusive, DivergentSum };

std::string verdict_name(MomentVerdict v);

// Sufficient condition for a finite fractional moment of the process:
// E|eps|^{2 rho} * sum_j psi_j^rho < 1. `value` is the truncated left-hand
// side, `tail_bound` a one-sided bound on the truncation remainder (on the
// same scale), and the verdict is three-valued because the truncated sum can
// only prove, never disprove, values near 1.
struct MomentConditionRecord {
  double rho = 0.0;
  double moment_factor = 0.0;  // E|eps|^{2 rho}
  double weight_sum = 0.0;     // sum_{j<=n_weights} psi_j^rho
  double value = 0.0;          // moment_factor * weight_sum
  double tail_bound = 0.0;
  MomentVerdict verdict = MomentVerdict::Inconclusive;
};

MomentConditionRecord moment_condition(const ModelSpec& spec,
                                       const std::vector<double>& zeta,
                                       double gamma, double rho, long n_weights);

// Scan a grid of rho values; returns the satisfied record with the smallest
// value, or nothing if no grid point is satisfied.
std::optional<MomentConditionRecord> find_rho(const ModelSpec& spec,
                                              const std::vector<double>& zeta,
                                              double gamma,
                                              const std::vector<double>& grid,
                                              long n_weights);

}  // namespace archinf
