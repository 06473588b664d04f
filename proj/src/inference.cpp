#include "archinf/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "archinf/errors.hpp"
#include "archinf/ged.hpp"
#include "archinf/parallel.hpp"
#include "archinf/process.hpp"
#include "archinf/rng.hpp"
#include "archinf/special_functions.hpp"

namespace archinf {

InferenceResult sandwich(const FitResult& fit, long sample_size, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("sandwich: level must lie in (0,1)");
  if (sample_size < 1) throw std::domain_error("sandwich: sample_size must be >= 1");

  const int dim = fit.spec.theta_dim();
  SymEigen eh = sym_eigen(fit.hessian);
  const double emax = eh.values.back();
  const double emin = eh.values.front();
  if (!(emin > 1e-10 * std::max(emax, 0.0)))
    throw singular_hessian_error(
        "sandwich: averaged Hessian is not safely positive definite", eh.values);

  const Matrix hinv = sym_inverse(eh);
  Matrix cov = hinv * fit.outer_product * hinv;
  cov = cov.scaled(1.0 / static_cast<double>(sample_size));

  InferenceResult res;
  res.covariance = cov;
  res.ci_level = level;
  res.condition_number = emax / emin;
  res.boundary_warning = false;
  for (bool b : fit.boundary_flags) res.boundary_warning = res.boundary_warning || b;

  res.clt_safe = true;
  if (fit.spec.hyperbolic_decay()) {
    const double d_hat = fit.theta.zeta[fit.spec.d_index()];
    res.clt_safe = d_hat > 0.5;
  }

  const double z = norm_quantile(0.5 + level / 2.0);
  const std::vector<double> flat = fit.theta.flat();
  res.std_errors.resize(dim);
  res.ci.resize(dim);
  for (int i = 0; i < dim; ++i) {
    res.std_errors[i] = std::sqrt(std::max(0.0, cov(i, i)));
    res.ci[i] = {flat[i] - z * res.std_errors[i], flat[i] + z * res.std_errors[i]};
  }
  return res;
}

PopulationMatrices population_matrices(const ModelSpec& spec,
                                       const ParamVector& theta0, double gamma,
                                       long path_length, int replications,
                                       std::uint64_t seed, long presample,
                                       long n_weights, int threads) {
  if (path_length < 1 || replications < 1)
    throw std::domain_error("population_matrices: path_length and replications must be >= 1");
  if (presample < 0) presample = n_weights;
  const int dim = spec.theta_dim();

  struct Acc {
    Matrix m, n;
    double p = 0.0;
    long count = 0;
  };
  std::vector<Acc> slots(replications);

  parallel_for(replications, threads, [&](long rep) {
    SimConfig cfg;
    cfg.spec = spec;
    cfg.theta0 = theta0;
    cfg.gamma = gamma;
    cfg.sample_size = presample + path_length;
    cfg.n_weights = n_weights;
    cfg.seed = mix_seed(seed, static_cast<std::uint64_t>(rep),
                        static_cast<std::uint64_t>(path_length));
    Series y = simulate(cfg);

    LikelihoodEvaluator ev(spec, std::move(y), n_weights);
    LikelihoodEvaluator::TauSigma ts = ev.tau_sigma(theta0);

    Acc a;
    a.m = Matrix(dim, dim);
    a.n = Matrix(dim, dim);
    const long total = presample + path_length;
    for (long t = presample; t < total; ++t) {
      const double s2 = ts.s2[t];
      const double sinv = 1.0 / std::sqrt(s2);
      for (int i = 0; i < dim; ++i) {
        const double ti = ts.tau(t, i);
        a.n(i, 1) += ti * sinv;
        for (int j = i; j < dim; ++j) a.m(i, j) += ti * ts.tau(t, j);
      }
      a.p += 1.0 / s2;
      ++a.count;
    }
    slots[rep] = std::move(a);
  });

  Matrix M(dim, dim), N(dim, dim), P(dim, dim);
  double p = 0.0;
  long count = 0;
  for (const Acc& a : slots) {
    M = M + a.m;
    N = N + a.n;
    p += a.p;
    count += a.count;
  }
  const double inv = 1.0 / static_cast<double>(count);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      M(i, j) *= inv;
      M(j, i) = M(i, j);
    }
  N = N.scaled(inv);
  P(1, 1) = p * inv;

  const Cumulants k = ged_cumulants(gamma);
  PopulationMatrices out;
  out.M = M;
  out.N = N;
  out.P = P;
  // From u = tau (1 - eps^2) - (2 eps / sigma) e2:
  //   E uu'  = (2 + k4) M + 2 k3 (N + N') + 4 P
  //   E d2q  = M + 2 P
  // (the mu-direction blocks carry the factor -2 from d x^2 / d mu).
  out.G = M.scaled(2.0 + k.k4) + (N + N.transpose()).scaled(2.0 * k.k3) +
          P.scaled(4.0);
  out.H = M + P.scaled(2.0);
  return out;
}

}  // namespace archinf
