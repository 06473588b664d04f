#include "archinf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "archinf/errors.hpp"
#include "archinf/inference.hpp"
#include "archinf/parallel.hpp"
#include "archinf/rng.hpp"
#include "archinf/special_functions.hpp"

namespace archinf {

void MCConfig::validate() const {
  spec.validate();
  theta0.bounds.validate(spec);
  if (replications < 50) throw std::domain_error("mc: replications must be >= 50");
  if (sample_sizes.empty()) throw std::domain_error("mc: no sample sizes given");
  for (long t : sample_sizes)
    if (t < 10 * spec.theta_dim())
      throw std::domain_error("mc: every sample size must be >= 10*(r+2)");
  if (!(ci_level > 0.0 && ci_level < 1.0))
    throw std::domain_error("mc: ci_level must lie in (0,1)");
}

double anderson_darling_normal(std::vector<double> z) {
  const long n = static_cast<long>(z.size());
  if (n < 1) return 0.0;
  std::sort(z.begin(), z.end());
  double s = 0.0;
  for (long i = 0; i < n; ++i) {
    double lo = norm_cdf(z[i]);
    double hi = norm_cdf(z[n - 1 - i]);
    lo = std::min(1.0 - 1e-300, std::max(1e-300, lo));
    hi = std::min(1.0 - 1e-16, std::max(0.0, hi));
    s += (2.0 * i + 1.0) * (std::log(lo) + std::log1p(-hi));
  }
  return -static_cast<double>(n) - s / static_cast<double>(n);
}

namespace {

struct RepOutcome {
  bool converged = false;
  bool sandwich_ok = false;
  bool boundary = false;
  std::vector<double> theta_hat;
  std::vector<double> se;
};

RepOutcome run_one(const MCConfig& cfg, long sample_size, long rep) {
  SimConfig sim;
  sim.spec = cfg.spec;
  sim.theta0 = cfg.theta0;
  sim.gamma = cfg.gamma;
  sim.sample_size = sample_size;
  sim.burn_in = cfg.burn_in;
  sim.n_weights = cfg.n_weights;
  sim.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(rep),
                      static_cast<std::uint64_t>(sample_size));

  RepOutcome out;
  Series y;
  try {
    y = simulate(sim);
  } catch (const simulation_overflow_error&) {
    return out;
  }

  FitOptions fo = cfg.fit_options;
  fo.seed = splitmix64(sim.seed ^ 0xA24BAED4963EE407ULL);
  FitResult fr;
  try {
    fr = fit(y, cfg.spec, cfg.theta0.bounds, fo);
  } catch (const positivity_error&) {
    return out;
  }
  out.converged = fr.converged;
  out.theta_hat = fr.theta.flat();
  for (bool b : fr.boundary_flags) out.boundary = out.boundary || b;
  if (!fr.converged) return out;
  try {
    InferenceResult inf = sandwich(fr, sample_size, cfg.ci_level);
    out.se = inf.std_errors;
    out.sandwich_ok = true;
  } catch (const singular_hessian_error&) {
  }
  return out;
}

}  // namespace

MCReport run_mc(const MCConfig& cfg) {
  cfg.validate();
  MCReport report;

  {
    std::vector<double> grid = cfg.rho_grid;
    if (grid.empty())
      for (double r = 0.55; r < 0.995; r += 0.01) grid.push_back(r);
    report.moment_check =
        find_rho(cfg.spec, cfg.theta0.zeta, cfg.gamma, grid, cfg.n_weights);
  }

  const int dim = cfg.spec.theta_dim();
  const std::vector<double> truth = cfg.theta0.flat();
  const std::vector<std::string> names = cfg.spec.coord_names();
  const double z = norm_quantile(0.5 + cfg.ci_level / 2.0);

  for (long T : cfg.sample_sizes) {
    std::vector<RepOutcome> slots(cfg.replications);
    parallel_for(cfg.replications, cfg.threads,
                 [&](long rep) { slots[rep] = run_one(cfg, T, rep); });

    MCSizeReport sr;
    sr.sample_size = T;
    long n_boundary = 0;
    for (const auto& o : slots) {
      if (o.converged) ++sr.n_converged;
      if (o.converged && o.sandwich_ok) ++sr.n_sandwich_ok;
      if (o.converged && o.boundary) ++n_boundary;
    }
    sr.frac_converged =
        static_cast<double>(sr.n_converged) / static_cast<double>(cfg.replications);
    sr.frac_boundary =
        sr.n_converged > 0
            ? static_cast<double>(n_boundary) / static_cast<double>(sr.n_converged)
            : 0.0;
    {
      const double p = cfg.ci_level;
      const double band =
          3.0 * std::sqrt(p * (1.0 - p) / std::max<long>(1, sr.n_sandwich_ok));
      sr.coverage_band_lo = std::max(0.0, p - band);
      sr.coverage_band_hi = std::min(1.0, p + band);
    }

    for (int c = 0; c < dim; ++c) {
      CoordStats cs;
      cs.name = names[c];
      double sum = 0.0, sumsq_err = 0.0;
      long n = 0;
      for (const auto& o : slots) {
        if (!o.converged) continue;
        const double err = o.theta_hat[c] - truth[c];
        sum += o.theta_hat[c];
        sumsq_err += err * err;
        ++n;
      }
      if (n > 0) {
        const double mean = sum / n;
        cs.bias = mean - truth[c];
        cs.rmse = std::sqrt(sumsq_err / n);
        double var = 0.0;
        for (const auto& o : slots) {
          if (!o.converged) continue;
          var += (o.theta_hat[c] - mean) * (o.theta_hat[c] - mean);
        }
        cs.bias_mcse = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
      }

      long covered = 0, n_ci = 0;
      std::vector<double> standardized;
      for (const auto& o : slots) {
        if (!o.converged || !o.sandwich_ok) continue;
        const double err = o.theta_hat[c] - truth[c];
        if (o.se[c] > 0.0) {
          ++n_ci;
          if (std::abs(err) <= z * o.se[c]) ++covered;
          standardized.push_back(err / o.se[c]);
        }
      }
      cs.coverage = n_ci > 0 ? static_cast<double>(covered) / n_ci : 0.0;
      cs.ad_stat = anderson_darling_normal(std::move(standardized));
      sr.coords.push_back(std::move(cs));
    }
    report.by_size.push_back(std::move(sr));
  }
  return report;
}

double gaussian_identity_check(const ModelSpec& spec, const ParamVector& theta0,
                               long sample_size, int replications,
                               std::uint64_t seed, double gamma, long n_weights,
                               int threads) {
  std::vector<double> ratios(replications, 0.0);
  parallel_for(replications, threads, [&](long rep) {
    SimConfig sim;
    sim.spec = spec;
    sim.theta0 = theta0;
    sim.gamma = gamma;
    sim.sample_size = sample_size;
    sim.n_weights = n_weights;
    sim.seed = mix_seed(seed, static_cast<std::uint64_t>(rep),
                        static_cast<std::uint64_t>(sample_size));
    Series y = simulate(sim);
    LikelihoodEvaluator ev(spec, std::move(y), n_weights);
    LikelihoodEvaluator::Curvature c = ev.curvature(theta0);
    const Matrix diff = c.outer_product - c.hessian.scaled(2.0);
    ratios[rep] = frobenius_norm(diff) / frobenius_norm(c.hessian);
  });
  double worst = 0.0;
  for (double r : ratios) worst = std::max(worst, r);
  return worst;
}

}  // namespace archinf
