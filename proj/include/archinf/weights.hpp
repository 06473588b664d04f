#pragma once

#include <utility>
#include <vector>

#include "archinf/linalg.hpp"
#include "archinf/model.hpp"

namespace archinf {

// Coefficients of z^j, j = 1..n, in 1 - (1-z)^d, for d in (0, 1].
// Multiplicative recursion; never evaluates gamma ratios at large j.
std::vector<double> frac_coeffs(double d, long n);

// First or second derivative in d of frac_coeffs, via the differentiated
// recursion.
std::vector<double> frac_coeffs_d_deriv(double d, long n, int order);

// Power series of a(z)/b(z) (figarch_form = false) or {1 - a(z)}/b(z)
// (figarch_form = true), coefficients of z^1..z^n; the leading constant term
// (0 respectively 1) is implicit. a(z) = sum a_j z^j, b(z) = 1 - sum b_j z^j.
// Throws stability_error if b has a root with modulus <= 1 + 1e-8.
std::vector<double> ratio_coeffs(const std::vector<double>& a,
                                 const std::vector<double>& b, long n,
                                 bool figarch_form);

// First n ARCH weights psi_1..psi_n for the given family and parameter block.
// Throws positivity_error when a weight is <= 0 (all families except Zero).
std::vector<double> weights(const ModelSpec& spec, const std::vector<double>& zeta,
                            long n);

// Weights together with analytic derivatives in zeta.
//   jac[k][j]  = d psi_{j+1} / d zeta_k
//   hess[p][j] = d^2 psi_{j+1} / (d zeta_k d zeta_l), p = packed index of (k,l)
struct WeightSet {
  std::vector<double> psi;
  std::vector<std::vector<double>> jac;
  std::vector<std::vector<double>> hess;  // packed upper triangle, k <= l

  static int pack(int k, int l, int r) {
    if (k > l) std::swap(k, l);
    return k * r - k * (k - 1) / 2 + (l - k);
  }
};

// order: 0 = weights only, 1 = + jacobian, 2 = + hessian.
WeightSet weight_set(const ModelSpec& spec, const std::vector<double>& zeta,
                     long n, int order, bool check_positivity = true);

Matrix weights_jacobian(const ModelSpec& spec, const std::vector<double>& zeta,
                        long n);

// hessians[j] is the r x r symmetric matrix of second derivatives of psi_{j+1}.
std::vector<Matrix> weights_hessian(const ModelSpec& spec,
                                    const std::vector<double>& zeta, long n);

struct AssumptionReport {
  bool positive = false;
  long first_nonpositive = -1;  // 1-based lag, -1 when all positive

  // Tail decay over j in [n/2, n]: least-squares fits of log psi against
  // log j and against j; the better fit classifies the decay.
  bool decay_exponential = false;
  double fitted_tail_exponent = 0.0;      // psi_j ~ j^{-p}, fitted p
  double theoretical_tail_exponent = 0.0; // d + 1 for hyperbolic families, NaN else

  // Empirical constant in the quasi-monotonicity bound psi_j <= K psi_k, k <= j.
  double quasi_monotonicity_K = 0.0;

  // Numeric rank of the weight jacobian over greedily selected lags.
  int rank = 0;
  bool full_rank = false;
  std::vector<long> rank_rows;  // 1-based lags chosen
  double rank_det = 0.0;        // det of the selected square block when full rank

  bool clt_unsafe = false;  // hyperbolic decay with d <= 1/2

  // Spread of psi_j * j^(d+1) over the tail half (hyperbolic families).
  double tail_ratio_min = 0.0;
  double tail_ratio_max = 0.0;
};

AssumptionReport check_assumptions(const ModelSpec& spec,
                                   const std::vector<double>& zeta, long n,
                                   int window = 64);

}  // namespace archinf
