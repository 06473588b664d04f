#include "archinf/ged.hpp"

#include <cmath>
#include <stdexcept>

namespace archinf {

namespace {
void require_gamma(double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("ged: gamma must be positive");
}
}  // namespace

double ged_alpha(double gamma) {
  require_gamma(gamma);
  return std::exp(0.5 * (std::lgamma(gamma) - std::lgamma(3.0 * gamma)));
}

double ged_log_density(double gamma, double eps) {
  require_gamma(gamma);
  const double log_alpha = 0.5 * (std::lgamma(gamma) - std::lgamma(3.0 * gamma));
  const double log_norm =
      -std::log(2.0 * gamma) - std::lgamma(gamma) - log_alpha;
  if (eps == 0.0) return log_norm;
  const double u = std::exp((std::log(std::abs(eps)) - log_alpha) / gamma);
  return log_norm - u;
}

double ged_density(double gamma, double eps) {
  return std::exp(ged_log_density(gamma, eps));
}

double ged_abs_moment(double gamma, double q) {
  require_gamma(gamma);
  if (!(q > 0.0)) throw std::domain_error("ged_abs_moment: q must be positive");
  return std::exp(std::lgamma((q + 1.0) * gamma) -
                  (1.0 - 0.5 * q) * std::lgamma(gamma) -
                  0.5 * q * std::lgamma(3.0 * gamma));
}

Cumulants ged_cumulants(double gamma) {
  require_gamma(gamma);
  // Symmetric density: k3 = 0. k4 = E eps^4 - 3 with E eps^2 = 1.
  const double fourth = std::exp(std::lgamma(5.0 * gamma) + std::lgamma(gamma) -
                                 2.0 * std::lgamma(3.0 * gamma));
  return {0.0, fourth - 3.0};
}

GedSampler::GedSampler(double gamma, std::uint64_t seed)
    : gamma_(gamma), alpha_(ged_alpha(gamma)), rng_(seed) {
  require_gamma(gamma);
}

double GedSampler::operator()() {
  const double v = rng_.gamma(gamma_);
  const double mag = (v > 0.0) ? std::exp(gamma_ * std::log(v)) * alpha_ : 0.0;
  const bool negative = (rng_.raw() & 1ULL) != 0;
  return negative ? -mag : mag;
}

std::vector<double> GedSampler::sample(std::size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = (*this)();
  return out;
}

std::vector<double> ged_sample(double gamma, std::size_t n, std::uint64_t seed) {
  return GedSampler(gamma, seed).sample(n);
}

}  // namespace archinf
