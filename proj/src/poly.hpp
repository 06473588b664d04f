#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace archinf::detail {

// Roots of c[0] + c[1] z + ... + c[deg] z^deg by Durand-Kerner iteration.
// Trailing near-zero coefficients are trimmed. Degree here never exceeds a
// handful, so the plain iteration is plenty.
inline std::vector<std::complex<double>> poly_roots(std::vector<double> c) {
  while (c.size() > 1 && std::abs(c.back()) < 1e-14) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  std::vector<std::complex<double>> roots;
  if (deg < 1) return roots;

  std::vector<std::complex<double>> z(deg);
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> p(1.0, 0.0);
  for (int i = 0; i < deg; ++i) {
    p *= seed;
    z[i] = p;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v(0.0, 0.0);
    for (int i = deg; i >= 0; --i) v = v * x + c[i];
    return v;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double shift = 0.0;
    for (int i = 0; i < deg; ++i) {
      std::complex<double> denom = c[deg];
      for (int j = 0; j < deg; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      const std::complex<double> delta = eval(z[i]) / denom;
      z[i] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-14) break;
  }
  return z;
}

// Roots of the lag polynomial 1 - b_1 z - ... - b_n z^n.
inline std::vector<std::complex<double>> lag_poly_roots(const std::vector<double>& b) {
  std::vector<double> c(b.size() + 1);
  c[0] = 1.0;
  for (std::size_t i = 0; i < b.size(); ++i) c[i + 1] = -b[i];
  return poly_roots(c);
}

// Smallest root modulus of the lag polynomial; +inf when degree zero.
inline double lag_poly_min_root_modulus(const std::vector<double>& b) {
  auto roots = lag_poly_roots(b);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : roots) m = std::min(m, std::abs(r));
  return m;
}

}  // namespace archinf::detail
