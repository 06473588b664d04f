// Independent reference implementations used only as test oracles. These are
// deliberately written from the defining formulas (series expansions, direct
// sums, quadrature) rather than through the library's recursions.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// The series oracles run in long double so their own rounding sits well below
// the 1e-12 comparison tolerance (double lgamma alone costs ~1e-12 in relative
// terms by j = 1000).

// pi_j = d * Gamma(j - d) / (Gamma(1 - d) Gamma(j + 1)) by direct log-gamma
// evaluation; coefficients of z^j in 1 - (1-z)^d.
inline std::vector<long double> frac_coeffs_gamma_l(double d, long n) {
  std::vector<long double> out(n);
  if (d == 1.0) {
    for (long j = 1; j <= n; ++j) out[j - 1] = (j == 1) ? 1.0L : 0.0L;
    return out;
  }
  const long double dl = d;
  for (long j = 1; j <= n; ++j)
    out[j - 1] = dl * std::exp(std::lgamma(static_cast<long double>(j) - dl) -
                               std::lgamma(1.0L - dl) -
                               std::lgamma(static_cast<long double>(j) + 1.0L));
  return out;
}

inline std::vector<double> frac_coeffs_gamma(double d, long n) {
  const auto l = frac_coeffs_gamma_l(d, n);
  return std::vector<double>(l.begin(), l.end());
}

// Power series of num(z) / b(z) by explicit long division,
// b(z) = 1 - sum b_i z^i. Returns coefficients of z^1..z^n of the quotient
// given the numerator's coefficients of z^0..z^n (num[0] = constant term).
inline std::vector<long double> long_division_l(std::vector<long double> num,
                                                const std::vector<double>& b,
                                                long n) {
  num.resize(n + 1, 0.0L);
  std::vector<long double> q(n + 1, 0.0L);
  for (long j = 0; j <= n; ++j) {
    long double v = num[j];
    for (std::size_t i = 1; i <= b.size() && static_cast<long>(i) <= j; ++i)
      v += static_cast<long double>(b[i - 1]) * q[j - i];
    q[j] = v;
  }
  return std::vector<long double>(q.begin() + 1, q.end());
}

inline std::vector<double> long_division(const std::vector<double>& num,
                                         const std::vector<double>& b, long n) {
  std::vector<long double> numl(num.begin(), num.end());
  const auto l = long_division_l(std::move(numl), b, n);
  return std::vector<double>(l.begin(), l.end());
}

// FGARCH weights from the defining generating function
// a(z) {1 - (1-z)^d} / (z b(z)): long division and a Cauchy product.
inline std::vector<double> fgarch_weights(const std::vector<double>& a,
                                          const std::vector<double>& b, double d,
                                          long n) {
  // c(z) = a(z)/b(z), coefficients of z^1..z^n
  std::vector<long double> num(a.size() + 1, 0.0L);
  for (std::size_t j = 0; j < a.size(); ++j) num[j + 1] = a[j];
  const auto c = long_division_l(std::move(num), b, n);
  // frac(z) = z^{-1} (1 - (1-z)^d): coefficients of z^0.. are pi_{k+1}
  const auto pi = frac_coeffs_gamma_l(d, n);
  std::vector<double> psi(n, 0.0);
  for (long j = 1; j <= n; ++j) {
    long double s = 0.0L;
    for (long k = 0; k <= j - 1; ++k) s += c[j - k - 1] * pi[k];
    psi[j - 1] = static_cast<double>(s);
  }
  return psi;
}

// FIGARCH weights from 1 - {1 - a(z)} (1-z)^d / b(z).
inline std::vector<double> figarch_weights(const std::vector<double>& a,
                                           const std::vector<double>& b, double d,
                                           long n) {
  std::vector<long double> num(n + 1, 0.0L);
  num[0] = 1.0L;
  for (std::size_t j = 0; j < a.size(); ++j) num[j + 1] = -a[j];
  // phi(z) = {1-a(z)}/b(z) including the constant term
  const auto tail = long_division_l(num, b, n);
  std::vector<long double> phi(n + 1, 0.0L);
  phi[0] = num[0];
  for (long j = 1; j <= n; ++j) phi[j] = tail[j - 1];
  // g(z) = (1-z)^d
  const auto pi = frac_coeffs_gamma_l(d, n);
  std::vector<long double> g(n + 1, 0.0L);
  g[0] = 1.0L;
  for (long j = 1; j <= n; ++j) g[j] = -pi[j - 1];
  std::vector<double> psi(n, 0.0);
  for (long j = 1; j <= n; ++j) {
    long double s = 0.0L;
    for (long k = 0; k <= j; ++k) s += phi[k] * g[j - k];
    psi[j - 1] = static_cast<double>(-s);
  }
  return psi;
}

// Adaptive Simpson quadrature.
inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb, double whole,
                          double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int depth = 60) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Quadrature over [-hi, hi] with log-spaced panels toward zero, for densities
// with an integrable cusp at the origin (sharp-peak shapes) and for symmetric
// integrands that an interval straddling zero would sample as identically 0.
inline double integrate_symmetric(const std::function<double(double)>& f, double hi,
                                  double tol = 1e-11) {
  std::vector<double> bp;
  bp.push_back(0.0);
  for (int k = -18; k <= 0; ++k) {
    const double v = std::pow(10.0, k);
    if (v < hi) bp.push_back(v);
  }
  for (double v : {2.0, 5.0, 10.0, 20.0, 35.0, 50.0, 100.0, 300.0, 1000.0, 3000.0,
                   1e4, 3e4, 1e5, 3e5, 1e6, 3e6}) {
    if (v < hi) bp.push_back(v);
  }
  bp.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    total += integrate(f, bp[i], bp[i + 1], tol / bp.size());
    total += integrate(f, -bp[i + 1], -bp[i], tol / bp.size());
  }
  return total;
}

// sigma_bar_t^2 by the defining double loop.
inline std::vector<double> sigma_bar_brute(double omega, double mu,
                                           const std::vector<double>& y,
                                           const std::vector<double>& psi) {
  const long T = static_cast<long>(y.size());
  std::vector<double> out(T, omega);
  for (long t = 1; t <= T; ++t)
    for (long j = 1; j <= t - 1 && j <= static_cast<long>(psi.size()); ++j) {
      const double x = y[t - j - 1] - mu;
      out[t - 1] += psi[j - 1] * x * x;
    }
  return out;
}

inline double qll_brute(double omega, double mu, const std::vector<double>& y,
                        const std::vector<double>& psi) {
  const auto s2 = sigma_bar_brute(omega, mu, y, psi);
  double q = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double x = y[t] - mu;
    q += x * x / s2[t] + std::log(s2[t]);
  }
  return q / static_cast<double>(y.size());
}

// Central finite differences of a scalar function of a vector.
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double rel_step = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = rel_step * (1.0 + std::abs(x[i]));
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fmi = f(x);
    x[i] = xi;
    g[i] = (fp - fmi) / (2.0 * h);
  }
  return g;
}

}  // namespace oracle
