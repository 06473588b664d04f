#pragma once

#include <span>
#include <vector>

#include "archinf/linalg.hpp"
#include "archinf/model.hpp"

namespace archinf {

// Truncated conditional variance sigma_bar_t^2 = omega + sum_{j<t} psi_j x_{t-j}^2,
// using at most psi.size() lags.
std::vector<double> sigma_bar_sq(const ParamVector& theta, const Series& y,
                                 std::span<const double> psi);

struct ScoreResult {
  Matrix per_t;              // T x dim rows of the per-observation score
  std::vector<double> mean;  // average score (gradient of the objective)
};

// Gaussian quasi-likelihood objective and its analytic derivatives for a fixed
// series. Evaluations are independent given theta; distinct evaluators can run
// concurrently over the same series. n_weights < 0 means full history
// (exact truncated likelihood); a positive value caps the lag window.
class LikelihoodEvaluator {
 public:
  LikelihoodEvaluator(ModelSpec spec, Series y, long n_weights = -1);

  double value(const ParamVector& theta);
  double value_and_gradient(const ParamVector& theta, std::vector<double>& grad);
  ScoreResult score(const ParamVector& theta);
  Matrix hessian(const ParamVector& theta);
  Matrix outer_product(const ParamVector& theta);

  struct Curvature {
    Matrix hessian;
    Matrix outer_product;
  };
  Curvature curvature(const ParamVector& theta);

  // Per-observation tau_t = d log sigma_bar_t^2 / d theta and sigma_bar_t^2.
  struct TauSigma {
    Matrix tau;              // T x dim
    std::vector<double> s2;  // T
  };
  TauSigma tau_sigma(const ParamVector& theta);

  long sample_size() const { return static_cast<long>(y_.size()); }
  long lag_window() const { return window_; }
  const ModelSpec& spec() const { return spec_; }
  const Series& series() const { return y_; }

 private:
  struct Work;
  void prepare(const ParamVector& theta, int order, Work& w);

  ModelSpec spec_;
  Series y_;
  long window_;
};

// Convenience wrappers around a one-shot evaluator.
double qll(const ModelSpec& spec, const ParamVector& theta, const Series& y,
           long n_weights = -1);
ScoreResult score(const ModelSpec& spec, const ParamVector& theta, const Series& y,
                  long n_weights = -1);
Matrix hessian(const ModelSpec& spec, const ParamVector& theta, const Series& y,
               long n_weights = -1);
Matrix outer_product(const ModelSpec& spec, const ParamVector& theta,
                     const Series& y, long n_weights = -1);

}  // namespace archinf
