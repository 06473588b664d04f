#include "archinf/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "archinf/errors.hpp"
#include "archinf/rng.hpp"

namespace archinf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective wrapper: infeasible parameter blocks (unstable denominator,
// nonpositive FIGARCH weights) act as +inf so the line search backs away.
class Objective {
 public:
  Objective(LikelihoodEvaluator& ev, const Bounds& bounds)
      : ev_(ev), bounds_(bounds) {}

  double value(const std::vector<double>& th) {
    try {
      return ev_.value(ParamVector::from_flat(th, bounds_));
    } catch (const stability_error&) {
      return kInf;
    } catch (const positivity_error&) {
      return kInf;
    } catch (const std::domain_error&) {
      return kInf;
    }
  }

  double value_and_gradient(const std::vector<double>& th, std::vector<double>& g) {
    try {
      return ev_.value_and_gradient(ParamVector::from_flat(th, bounds_), g);
    } catch (const stability_error&) {
      return kInf;
    } catch (const positivity_error&) {
      return kInf;
    } catch (const std::domain_error&) {
      return kInf;
    }
  }

  Matrix hessian(const std::vector<double>& th) {
    return ev_.hessian(ParamVector::from_flat(th, bounds_));
  }

 private:
  LikelihoodEvaluator& ev_;
  const Bounds& bounds_;
};

double proj_grad_norm(const std::vector<double>& x, const std::vector<double>& g,
                      const Bounds& b) {
  double norm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double moved = std::min(b.hi[i], std::max(b.lo[i], x[i] - g[i]));
    norm = std::max(norm, std::abs(x[i] - moved));
  }
  return norm;
}

struct StartResult {
  std::vector<double> x;
  double f = kInf;
  double pg = kInf;
  int iterations = 0;
  bool converged = false;
  bool feasible = false;
};

StartResult minimize_from(Objective& obj, std::vector<double> x, const Bounds& bounds,
                          const FitOptions& opts) {
  const int dim = static_cast<int>(x.size());
  StartResult res;

  std::vector<double> g(dim), gnew(dim), d(dim), xnew(dim), s(dim), yv(dim);
  double f = obj.value_and_gradient(x, g);
  if (!std::isfinite(f)) return res;  // infeasible start
  res.feasible = true;

  // Inverse curvature: analytic Hessian when safely positive definite,
  // otherwise identity (it can be indefinite away from the optimum).
  Matrix B = Matrix::identity(dim);
  try {
    Matrix H = obj.hessian(x);
    SymEigen e = sym_eigen(H);
    if (e.values.front() > 1e-8) B = sym_inverse(e);
  } catch (...) {
  }

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const double pg = proj_grad_norm(x, g, bounds);
    if (pg <= opts.grad_tol) {
      res.converged = true;
      break;
    }

    for (int i = 0; i < dim; ++i) {
      double di = 0.0;
      for (int j = 0; j < dim; ++j) di -= B(i, j) * g[j];
      d[i] = di;
    }
    // Block components pushing against an active bound.
    for (int i = 0; i < dim; ++i) {
      if (x[i] <= bounds.lo[i] && d[i] < 0.0) d[i] = 0.0;
      if (x[i] >= bounds.hi[i] && d[i] > 0.0) d[i] = 0.0;
    }
    double dg = 0.0;
    for (int i = 0; i < dim; ++i) dg += d[i] * g[i];
    if (!(dg < 0.0)) {
      // Quasi-Newton direction unusable; steepest feasible descent instead.
      for (int i = 0; i < dim; ++i) d[i] = -g[i];
      for (int i = 0; i < dim; ++i) {
        if (x[i] <= bounds.lo[i] && d[i] < 0.0) d[i] = 0.0;
        if (x[i] >= bounds.hi[i] && d[i] > 0.0) d[i] = 0.0;
      }
      B = Matrix::identity(dim);
    }

    // Projected backtracking line search (Armijo on the projected step); if
    // the quasi-Newton direction fails, retry once along steepest descent.
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        for (int i = 0; i < dim; ++i) d[i] = -g[i];
        for (int i = 0; i < dim; ++i) {
          if (x[i] <= bounds.lo[i] && d[i] < 0.0) d[i] = 0.0;
          if (x[i] >= bounds.hi[i] && d[i] > 0.0) d[i] = 0.0;
        }
        B = Matrix::identity(dim);
      }
      double lambda = 1.0;
      for (int ls = 0; ls < 40; ++ls) {
        for (int i = 0; i < dim; ++i)
          xnew[i] =
              std::min(bounds.hi[i], std::max(bounds.lo[i], x[i] + lambda * d[i]));
        double gstep = 0.0;
        double step_inf = 0.0;
        for (int i = 0; i < dim; ++i) {
          gstep += g[i] * (xnew[i] - x[i]);
          step_inf =
              std::max(step_inf, std::abs(xnew[i] - x[i]) / (1.0 + std::abs(x[i])));
        }
        if (step_inf < opts.step_tol) break;
        const double fnew = obj.value(xnew);
        if (std::isfinite(fnew) && fnew <= f + 1e-4 * gstep) {
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
    }
    if (!accepted) break;  // stalled

    f = obj.value_and_gradient(xnew, gnew);
    for (int i = 0; i < dim; ++i) {
      s[i] = xnew[i] - x[i];
      yv[i] = gnew[i] - g[i];
    }
    x = xnew;
    g = gnew;

    double sy = 0.0, snorm = 0.0, ynorm = 0.0;
    for (int i = 0; i < dim; ++i) {
      sy += s[i] * yv[i];
      snorm += s[i] * s[i];
      ynorm += yv[i] * yv[i];
    }
    if (sy > 1e-12 * std::sqrt(snorm * ynorm)) {
      // BFGS update of the inverse approximation.
      std::vector<double> By(dim, 0.0);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) By[i] += B(i, j) * yv[j];
      double yBy = 0.0;
      for (int i = 0; i < dim; ++i) yBy += yv[i] * By[i];
      const double c1 = (sy + yBy) / (sy * sy);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          B(i, j) += c1 * s[i] * s[j] - (By[i] * s[j] + s[i] * By[j]) / sy;
    }
  }

  // Newton polish: close to the minimizer the objective moves by less than
  // one ulp along any Armijo step, so the backtracking loop above stalls with
  // a gradient around 1e-5. Full Newton steps with the analytic Hessian
  // certify the last digits instead.
  if (!res.converged) {
    double pg = proj_grad_norm(x, g, bounds);
    for (int k = 0; k < 15 && pg > opts.grad_tol; ++k) {
      Matrix H;
      try {
        H = obj.hessian(x);
      } catch (...) {
        break;
      }
      SymEigen e = sym_eigen(H);
      if (!(e.values.front() > 1e-8)) break;
      const Matrix Hinv = sym_inverse(e);
      for (int i = 0; i < dim; ++i) {
        double di = 0.0;
        for (int j = 0; j < dim; ++j) di -= Hinv(i, j) * g[j];
        xnew[i] = std::min(bounds.hi[i], std::max(bounds.lo[i], x[i] + di));
      }
      const double fn = obj.value_and_gradient(xnew, gnew);
      if (!std::isfinite(fn) || fn > f + 1e-12 * (1.0 + std::abs(f))) break;
      const double pgn = proj_grad_norm(xnew, gnew, bounds);
      if (pgn >= pg) break;
      x = xnew;
      g = gnew;
      f = fn;
      pg = pgn;
      ++iter;
    }
  }

  res.x = x;
  res.f = f;
  res.pg = proj_grad_norm(x, g, bounds);
  res.iterations = iter;
  if (res.pg <= opts.grad_tol) res.converged = true;
  return res;
}

}  // namespace

FitResult fit(const Series& y, const ModelSpec& spec, const Bounds& bounds,
              const FitOptions& opts) {
  spec.validate();
  bounds.validate(spec);
  const int dim = spec.theta_dim();
  const long T = static_cast<long>(y.size());
  if (T < dim)
    throw std::domain_error("fit: need at least " + std::to_string(dim) +
                            " observations for " + std::to_string(dim) +
                            " parameters");
  if (opts.n_starts < 1) throw std::domain_error("fit: n_starts must be >= 1");

  LikelihoodEvaluator ev(spec, y, opts.n_weights);
  Objective obj(ev, bounds);

  // First start at the box center, the rest jittered around it.
  std::vector<std::vector<double>> starts;
  starts.push_back(bounds.center());
  Rng rng(splitmix64(opts.seed ^ 0x5851F42D4C957F2DULL));
  for (int k = 1; k < opts.n_starts; ++k) {
    std::vector<double> x = bounds.center();
    for (int i = 0; i < dim; ++i) {
      const double width = bounds.hi[i] - bounds.lo[i];
      x[i] += opts.start_jitter * width * rng.uniform_signed();
      const double margin = 1e-3 * width;
      x[i] = std::min(bounds.hi[i] - margin, std::max(bounds.lo[i] + margin, x[i]));
    }
    starts.push_back(std::move(x));
  }

  StartResult best;
  bool have_best = false;
  int failed = 0;
  for (const auto& s : starts) {
    StartResult r = minimize_from(obj, s, bounds, opts);
    if (!r.feasible) {
      ++failed;
      continue;
    }
    if (!have_best) {
      best = r;
      have_best = true;
      continue;
    }
    // Order-independent selection with a lexicographic tie break.
    if (r.f < best.f - 1e-10) {
      best = r;
    } else if (r.f <= best.f + 1e-10 &&
               std::lexicographical_compare(r.x.begin(), r.x.end(), best.x.begin(),
                                            best.x.end())) {
      best = r;
    }
  }
  if (!have_best)
    throw positivity_error("fit: no feasible starting point (weights nonpositive "
                           "or unstable for every start)",
                           -1);

  FitResult out;
  out.spec = spec;
  out.theta = ParamVector::from_flat(best.x, bounds);
  out.qll = best.f;
  out.projected_grad_norm = best.pg;
  out.converged = best.converged;
  out.iterations = best.iterations;
  out.n_starts_failed = failed;

  out.boundary_flags.resize(dim);
  for (int i = 0; i < dim; ++i) {
    const double width = bounds.hi[i] - bounds.lo[i];
    out.boundary_flags[i] = (best.x[i] - bounds.lo[i] <= 1e-6 * width) ||
                            (bounds.hi[i] - best.x[i] <= 1e-6 * width);
  }

  LikelihoodEvaluator::Curvature c = ev.curvature(out.theta);
  out.hessian = c.hessian;
  out.outer_product = c.outer_product;
  return out;
}

}  // namespace archinf
