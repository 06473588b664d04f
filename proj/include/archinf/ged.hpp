#pragma once

#include <cstdint>
#include <vector>

#include "archinf/rng.hpp"

namespace archinf {

// Generalized error distribution with unit variance, indexed by gamma > 0:
// gamma = 0.5 is the standard normal, gamma = 1 the unit-variance Laplace,
// larger gamma gives a sharper peak and heavier tails.
//
//   f(eps) = exp[-(|eps|/alpha)^(1/gamma)] / (2 gamma Gamma(gamma) alpha),
//   alpha  = sqrt(Gamma(gamma) / Gamma(3 gamma)).

double ged_alpha(double gamma);

double ged_density(double gamma, double eps);
double ged_log_density(double gamma, double eps);

// E|eps|^q = Gamma((q+1) gamma) / (Gamma(gamma)^(1-q/2) Gamma(3 gamma)^(q/2)).
double ged_abs_moment(double gamma, double q);

struct Cumulants {
  double k3;
  double k4;
};
Cumulants ged_cumulants(double gamma);

// Draws via the gamma-power transform: eps = sign * alpha * V^gamma with
// V ~ Gamma(shape = gamma, scale = 1) and an independent uniform sign.
// Deterministic for a given seed; each sampler owns its generator state.
class GedSampler {
 public:
  GedSampler(double gamma, std::uint64_t seed);
  double operator()();
  std::vector<double> sample(std::size_t n);

 private:
  double gamma_;
  double alpha_;
  Rng rng_;
};

std::vector<double> ged_sample(double gamma, std::size_t n, std::uint64_t seed);

}  // namespace archinf
