#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "archinf/fit.hpp"
#include "archinf/linalg.hpp"
#include "archinf/model.hpp"

namespace archinf {

struct InferenceResult {
  Matrix covariance;  // H^-1 G H^-1 / T at the minimizer
  std::vector<double> std_errors;
  std::vector<std::pair<double, double>> ci;
  double ci_level = 0.95;
  double condition_number = 0.0;  // of the averaged Hessian
  bool clt_safe = true;           // false for hyperbolic decay with d_hat <= 1/2
  bool boundary_warning = false;  // some coordinate sits on its bound
};

// Sandwich covariance and symmetric confidence intervals. Throws
// singular_hessian_error (with the spectrum) when the averaged Hessian has an
// eigenvalue below 1e-10 times its largest.
InferenceResult sandwich(const FitResult& fit, long sample_size, double level = 0.95);

// Monte Carlo estimates of the population curvature building blocks at theta0:
//   M = E tau tau',  N = E (tau / sigma) e2',  P = E sigma^-2 e2 e2',
//   G = (2 + k4) M + 2 k3 (N + N') + 4 P,  H = M + 2 P,
// averaged over R simulated paths of length path_length, discarding a
// presample so the truncated variance proxies the infinite-history one.
struct PopulationMatrices {
  Matrix G, H, M, N, P;
};

PopulationMatrices population_matrices(const ModelSpec& spec,
                                       const ParamVector& theta0, double gamma,
                                       long path_length, int replications,
                                       std::uint64_t seed, long presample = -1,
                                       long n_weights = 10000, int threads = 1);

}  // namespace archinf
