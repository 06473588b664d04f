#pragma once

namespace archinf {

// Digamma and trigamma for x > 0, relative accuracy better than 1e-13
// (upward recurrence into the asymptotic Bernoulli series).
double digamma(double x);
double trigamma(double x);

double norm_cdf(double z);

// Inverse standard normal CDF for p in (0, 1).
double norm_quantile(double p);

}  // namespace archinf
