#pragma once

#include <cstdint>
#include <vector>

#include "archinf/likelihood.hpp"
#include "archinf/linalg.hpp"
#include "archinf/model.hpp"

namespace archinf {

struct FitOptions {
  double grad_tol = 1e-8;   // sup-norm of the projected gradient
  double step_tol = 1e-10;  // relative step size below which a start stalls
  int max_iter = 500;
  int n_starts = 5;
  double start_jitter = 0.25;  // fraction of box width
  std::uint64_t seed = 0;
  long n_weights = -1;  // lag window; -1 = full history
};

struct FitResult {
  ModelSpec spec;
  ParamVector theta;  // minimizer, with its box
  double qll = 0.0;
  double projected_grad_norm = 0.0;
  Matrix hessian;        // averaged second-derivative matrix at the minimizer
  Matrix outer_product;  // averaged score outer product at the minimizer
  bool converged = false;
  int iterations = 0;
  std::vector<bool> boundary_flags;  // within 1e-6 * width of a bound
  int n_starts_failed = 0;           // starts with no feasible objective value
};

// Minimize the quasi-likelihood objective over the box from several starts
// (box center plus seeded jitters). Deterministic for a given seed; ties in
// the final objective (within 1e-10) break toward the lexicographically
// smallest parameter vector.
FitResult fit(const Series& y, const ModelSpec& spec, const Bounds& bounds,
              const FitOptions& opts = {});

}  // namespace archinf
