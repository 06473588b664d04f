#include "archinf/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "archinf/errors.hpp"
#include "archinf/ged.hpp"
#include "archinf/weights.hpp"

namespace archinf {

long default_burn_in(long n_weights) { return std::min<long>(10 * n_weights, 100000); }

double weight_total(const ModelSpec& spec, const std::vector<double>& zeta,
                    const std::vector<double>& psi) {
  switch (spec.family) {
    case Family::Zero:
      return 0.0;
    case Family::Garch:
    case Family::Fgarch: {
      // Generating function at z = 1: a(1) / b(1).
      double a1 = 0.0, b1 = 1.0;
      for (int j = 1; j <= spec.m; ++j) a1 += zeta[spec.a_index(j)];
      for (int j = 1; j <= spec.n; ++j) b1 -= zeta[spec.b_index(j)];
      return a1 / b1;
    }
    case Family::Figarch:
      return 1.0;  // the expansion always sums to one
    case Family::Gexp:
    case Family::Ghyp: {
      double sum = 0.0;
      for (double v : psi) sum += v;
      if (psi.empty()) return sum;
      const long n = static_cast<long>(psi.size());
      if (spec.family == Family::Gexp) {
        // Geometric tail bound from the last ratio.
        const double d = zeta[spec.d_index()];
        double fmax = 0.0;
        for (int i = 1; i <= spec.m; ++i) fmax = std::max(fmax, spec.shape_f(zeta, i));
        const double q = std::exp(-d) * std::pow((n + 1.0) / n, fmax);
        if (q < 1.0) sum += psi[n - 1] * q / (1.0 - q);
      } else {
        const double d = zeta[spec.d_index()];
        const double kemp = psi[n - 1] * std::pow(n + 1.0, d + 1.0);
        sum += kemp * std::pow(n + 1.0, -d) / d;
      }
      return sum;
    }
  }
  return 0.0;
}

Series simulate(const SimConfig& cfg) {
  if (cfg.sample_size < 1) throw std::domain_error("simulate: sample_size must be >= 1");
  if (cfg.n_weights < 1) throw std::domain_error("simulate: n_weights must be >= 1");
  const long burn = cfg.burn_in >= 0 ? cfg.burn_in : default_burn_in(cfg.n_weights);

  std::vector<double> psi = weights(cfg.spec, cfg.theta0.zeta, cfg.n_weights);
  // Drop the underflowed exponential tail; those lags contribute exactly zero.
  long len = static_cast<long>(psi.size());
  while (len > 0 && psi[len - 1] == 0.0) --len;
  psi.resize(len);

  if (weight_total(cfg.spec, cfg.theta0.zeta, psi) >= 1.0 && !cfg.allow_nonstationary)
    throw std::domain_error(
        "simulate: weights sum to >= 1 (not covariance stationary); "
        "set allow_nonstationary to proceed");

  const double omega = cfg.theta0.omega;
  if (!(omega > 0.0)) throw std::domain_error("simulate: omega must be positive");

  GedSampler eps(cfg.gamma, cfg.seed);
  const long total = burn + cfg.sample_size;
  std::vector<double> x2(total);
  Series y(cfg.sample_size);

  for (long t = 0; t < total; ++t) {
    double s2 = omega;
    const long lim = std::min<long>(t, len);
    const double* k = psi.data();
    const double* h = x2.data() + t;
    for (long j = 1; j <= lim; ++j) s2 += k[j - 1] * h[-j];
    if (!std::isfinite(s2))
      throw simulation_overflow_error(
          "simulate: conditional variance overflowed at t=" + std::to_string(t + 1),
          t + 1);
    const double xt = std::sqrt(s2) * eps();
    x2[t] = xt * xt;
    if (t >= burn) y[t - burn] = cfg.theta0.mu + xt;
  }
  return y;
}

std::string verdict_name(MomentVerdict v) {
  switch (v) {
    case MomentVerdict::Yes: return "yes";
    case MomentVerdict::No: return "no";
    case MomentVerdict::Inconclusive: return "inconclusive";
    case MomentVerdict::DivergentSum: return "divergent-sum";
  }
  return "?";
}

namespace {

// One-sided bound on E|eps|^{2 rho} * sum_{j > n} psi_j^rho. Infinity when no
// usable bound is available (verdict then stays inconclusive).
double tail_bound_value(const ModelSpec& spec, const std::vector<double>& zeta,
                        const std::vector<double>& psi, double rho,
                        double moment_factor) {
  const long n = static_cast<long>(psi.size());
  const double inf = std::numeric_limits<double>::infinity();
  switch (spec.family) {
    case Family::Zero:
      return 0.0;
    case Family::Fgarch:
    case Family::Figarch: {
      // psi_j <= K j^{-(d+1)} with the empirical K from the last coefficient,
      // then the integral comparison test.
      const double d = zeta[spec.d_index()];
      const double s = rho * (d + 1.0);
      if (!(s > 1.0)) return inf;
      const double kemp = psi[n - 1] * std::pow(static_cast<double>(n), d + 1.0);
      const double tail_sum =
          std::pow(kemp, rho) * std::pow(static_cast<double>(n), 1.0 - s) / (s - 1.0);
      return moment_factor * tail_sum;
    }
    case Family::Ghyp: {
      // Fold the log factor into a small power-law slack so the integral test
      // still applies: ln^f(x) <= C x^eps beyond x = e^{f/eps}.
      const double d = zeta[spec.d_index()];
      if (!(rho * (d + 1.0) > 1.0)) return inf;
      const double eps = (d + 1.0 - 1.0 / rho) / 2.0;
      double fmax = 0.0;
      for (int i = 1; i <= spec.m; ++i) fmax = std::max(fmax, spec.shape_f(zeta, i));
      if (n + 1 <= std::exp(fmax / eps)) return inf;
      const double sp = rho * (d + 1.0 - eps);
      const double b =
          std::pow(psi[n - 1], rho) * std::pow(static_cast<double>(n + 1), sp);
      const double tail_sum =
          b * std::pow(static_cast<double>(n + 1), 1.0 - sp) / (sp - 1.0);
      return moment_factor * tail_sum;
    }
    case Family::Gexp: {
      if (psi[n - 1] == 0.0) return 0.0;  // underflowed past machine range
      const double d = zeta[spec.d_index()];
      double fmax = 0.0;
      for (int i = 1; i <= spec.m; ++i) fmax = std::max(fmax, spec.shape_f(zeta, i));
      const double q =
          std::exp(-d) * std::pow((n + 1.0) / static_cast<double>(n), fmax);
      if (!(q < 1.0)) return inf;
      const double qr = std::pow(q, rho);
      return moment_factor * std::pow(psi[n - 1], rho) * qr / (1.0 - qr);
    }
    case Family::Garch: {
      if (psi[n - 1] == 0.0) return 0.0;
      // Empirical geometric ratio over the last stretch of coefficients.
      double q = 0.0;
      const long lo = std::max<long>(1, n - 10);
      for (long j = lo; j < n; ++j) {
        if (psi[j - 1] <= 0.0) return inf;
        q = std::max(q, psi[j] / psi[j - 1]);
      }
      if (!(q < 1.0)) return inf;
      const double qr = std::pow(q, rho);
      return moment_factor * std::pow(psi[n - 1], rho) * qr / (1.0 - qr);
    }
  }
  return inf;
}

}  // namespace

MomentConditionRecord moment_condition(const ModelSpec& spec,
                                       const std::vector<double>& zeta,
                                       double gamma, double rho, long n_weights) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::domain_error("moment_condition: rho must lie in (0,1)");
  if (n_weights < 1) throw std::domain_error("moment_condition: n_weights must be >= 1");

  MomentConditionRecord rec;
  rec.rho = rho;
  rec.moment_factor = ged_abs_moment(gamma, 2.0 * rho);

  if (spec.hyperbolic_decay()) {
    const double d = zeta[spec.d_index()];
    if (!(rho * (d + 1.0) > 1.0)) {
      rec.verdict = MomentVerdict::DivergentSum;
      rec.tail_bound = std::numeric_limits<double>::infinity();
      return rec;
    }
  }

  const std::vector<double> psi = weights(spec, zeta, n_weights);
  double s = 0.0;
  for (double v : psi) s += (v > 0.0) ? std::pow(v, rho) : 0.0;
  rec.weight_sum = s;
  rec.value = rec.moment_factor * s;
  rec.tail_bound = tail_bound_value(spec, zeta, psi, rho, rec.moment_factor);

  if (rec.value >= 1.0)
    rec.verdict = MomentVerdict::No;
  else if (rec.value + rec.tail_bound < 1.0)
    rec.verdict = MomentVerdict::Yes;
  else
    rec.verdict = MomentVerdict::Inconclusive;
  return rec;
}

std::optional<MomentConditionRecord> find_rho(const ModelSpec& spec,
                                              const std::vector<double>& zeta,
                                              double gamma,
                                              const std::vector<double>& grid,
                                              long n_weights) {
  std::optional<MomentConditionRecord> best;
  for (double rho : grid) {
    MomentConditionRecord rec = moment_condition(spec, zeta, gamma, rho, n_weights);
    if (rec.verdict != MomentVerdict::Yes) continue;
    if (!best || rec.value < best->value) best = rec;
  }
  return best;
}

}  // namespace archinf
