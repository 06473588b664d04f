#include "archinf/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "archinf/errors.hpp"
#include "archinf/special_functions.hpp"
#include "poly.hpp"

namespace archinf {

std::vector<double> frac_coeffs(double d, long n) {
  if (!(d > 0.0 && d <= 1.0)) throw std::domain_error("frac_coeffs: d must lie in (0,1]");
  if (n < 1) throw std::domain_error("frac_coeffs: n must be >= 1");
  std::vector<double> p(n);
  p[0] = d;
  for (long j = 1; j < n; ++j) p[j] = p[j - 1] * (j - d) / (j + 1);
  return p;
}

std::vector<double> frac_coeffs_d_deriv(double d, long n, int order) {
  if (!(d > 0.0 && d <= 1.0))
    throw std::domain_error("frac_coeffs_d_deriv: d must lie in (0,1]");
  if (n < 1) throw std::domain_error("frac_coeffs_d_deriv: n must be >= 1");
  if (order != 1 && order != 2)
    throw std::domain_error("frac_coeffs_d_deriv: order must be 1 or 2");

  std::vector<double> p(n), d1(n);
  p[0] = d;
  d1[0] = 1.0;
  for (long j = 1; j < n; ++j) {
    const double f = (j - d) / (j + 1);
    p[j] = p[j - 1] * f;
    d1[j] = d1[j - 1] * f - p[j - 1] / (j + 1);
  }
  if (order == 1) return d1;

  std::vector<double> d2(n);
  d2[0] = 0.0;
  for (long j = 1; j < n; ++j) {
    const double f = (j - d) / (j + 1);
    d2[j] = d2[j - 1] * f - 2.0 * d1[j - 1] / (j + 1);
  }
  return d2;
}

std::vector<double> ratio_coeffs(const std::vector<double>& a,
                                 const std::vector<double>& b, long n,
                                 bool figarch_form) {
  if (n < 1) throw std::domain_error("ratio_coeffs: n must be >= 1");
  if (!b.empty()) {
    const double min_mod = detail::lag_poly_min_root_modulus(b);
    if (!(min_mod > 1.0 + 1e-8))
      throw stability_error(
          "ratio_coeffs: denominator has a root with modulus <= 1+1e-8");
  }
  const long m = static_cast<long>(a.size());
  const long nb = static_cast<long>(b.size());
  std::vector<double> c(n, 0.0);
  if (!figarch_form) {
    // a(z)/b(z): c_j = a_j + sum_{i<=min(j-1,nb)} b_i c_{j-i}
    for (long j = 1; j <= n; ++j) {
      double v = (j <= m) ? a[j - 1] : 0.0;
      const long lim = std::min(j - 1, nb);
      for (long i = 1; i <= lim; ++i) v += b[i - 1] * c[j - i - 1];
      c[j - 1] = v;
    }
  } else {
    // {1 - a(z)}/b(z): constant term 1 implicit,
    // phi_j = -a_j + sum_{i<=min(j,nb)} b_i phi_{j-i}, phi_0 = 1.
    for (long j = 1; j <= n; ++j) {
      double v = (j <= m) ? -a[j - 1] : 0.0;
      const long lim = std::min(j, nb);
      for (long i = 1; i <= lim; ++i) {
        const double prev = (j - i == 0) ? 1.0 : c[j - i - 1];
        v += b[i - 1] * prev;
      }
      c[j - 1] = v;
    }
  }
  return c;
}

namespace {

// Shared recursion for the rational families: every computed sequence Q obeys
// Q_s = sum_{i=1..min(n,s-1)} b_i Q_{s-i} + forcing_s.
class ArFilter {
 public:
  ArFilter(const std::vector<double>& b) : b_(b) {}

  double apply(const std::vector<double>& q, long s /*1-based*/) const {
    const long lim = std::min<long>(s - 1, static_cast<long>(b_.size()));
    double acc = 0.0;
    for (long i = 1; i <= lim; ++i) acc += b_[i - 1] * q[s - i - 1];
    return acc;
  }

 private:
  const std::vector<double>& b_;
};

void compute_rational(const ModelSpec& spec, const std::vector<double>& zeta,
                      long N, int order, WeightSet& out) {
  const int m = spec.m, n = spec.n;
  const int r = spec.zeta_dim();
  const bool has_d = spec.has_d();
  const double d = has_d ? zeta[spec.d_index()] : 0.0;
  std::vector<double> a(zeta.begin(), zeta.begin() + m);
  std::vector<double> b(zeta.begin() + m, zeta.begin() + m + n);
  ArFilter ar(b);

  std::vector<double> ptil, D1, D2;
  if (has_d) {
    ptil = frac_coeffs(d, N);
    if (order >= 1) D1 = frac_coeffs_d_deriv(d, N, 1);
    if (order >= 2) D2 = frac_coeffs_d_deriv(d, N, 2);
  }
  // (1-z)^d expansion g_0 = 1, g_l = -ptil[l-1] and its d-derivatives.
  auto g = [&](long l) { return l == 0 ? 1.0 : -ptil[l - 1]; };
  auto gd = [&](long l) { return l == 0 ? 0.0 : -D1[l - 1]; };
  auto gdd = [&](long l) { return l == 0 ? 0.0 : -D2[l - 1]; };

  auto& psi = out.psi;
  psi.assign(N, 0.0);
  for (long s = 1; s <= N; ++s) {
    double f = 0.0;
    switch (spec.family) {
      case Family::Garch:
        f = (s <= m) ? a[s - 1] : 0.0;
        break;
      case Family::Fgarch:
        for (long k = 1; k <= std::min<long>(m, s); ++k)
          f += a[k - 1] * ptil[s - k];
        break;
      case Family::Figarch: {
        f = ptil[s - 1];
        if (s <= n) f -= b[s - 1];
        for (long k = 1; k <= std::min<long>(m, s); ++k) f += a[k - 1] * g(s - k);
        break;
      }
      default:
        break;
    }
    psi[s - 1] = f + ar.apply(psi, s);
  }
  if (order < 1) return;

  out.jac.assign(r, std::vector<double>(N, 0.0));
  for (int k = 1; k <= m; ++k) {
    auto& col = out.jac[spec.a_index(k)];
    for (long s = 1; s <= N; ++s) {
      double f = 0.0;
      if (spec.family == Family::Garch) {
        f = (s == k) ? 1.0 : 0.0;
      } else if (spec.family == Family::Fgarch) {
        if (k <= s) f = ptil[s - k];
      } else {
        if (k <= s) f = g(s - k);
      }
      col[s - 1] = f + ar.apply(col, s);
    }
  }
  for (int l = 1; l <= n; ++l) {
    auto& col = out.jac[spec.b_index(l)];
    for (long s = 1; s <= N; ++s) {
      double f = (s - l >= 1) ? psi[s - l - 1] : 0.0;
      if (spec.family == Family::Figarch && s == l) f -= 1.0;
      col[s - 1] = f + ar.apply(col, s);
    }
  }
  if (has_d) {
    auto& col = out.jac[spec.d_index()];
    for (long s = 1; s <= N; ++s) {
      double f = 0.0;
      if (spec.family == Family::Fgarch) {
        for (long k = 1; k <= std::min<long>(m, s); ++k) f += a[k - 1] * D1[s - k];
      } else {
        f = D1[s - 1];
        for (long k = 1; k <= std::min<long>(m, s); ++k) f += a[k - 1] * gd(s - k);
      }
      col[s - 1] = f + ar.apply(col, s);
    }
  }
  if (order < 2) return;

  out.hess.assign(r * (r + 1) / 2, std::vector<double>(N, 0.0));
  // (a_k, a_k') vanish identically: psi is linear in a given (b, d).
  for (int k = 1; k <= m; ++k)
    for (int l = 1; l <= n; ++l) {
      auto& col = out.hess[WeightSet::pack(spec.a_index(k), spec.b_index(l), r)];
      const auto& ja = out.jac[spec.a_index(k)];
      for (long s = 1; s <= N; ++s) {
        const double f = (s - l >= 1) ? ja[s - l - 1] : 0.0;
        col[s - 1] = f + ar.apply(col, s);
      }
    }
  if (has_d)
    for (int k = 1; k <= m; ++k) {
      auto& col = out.hess[WeightSet::pack(spec.a_index(k), spec.d_index(), r)];
      for (long s = 1; s <= N; ++s) {
        double f = 0.0;
        if (k <= s) f = (spec.family == Family::Fgarch) ? D1[s - k] : gd(s - k);
        col[s - 1] = f + ar.apply(col, s);
      }
    }
  for (int l = 1; l <= n; ++l)
    for (int l2 = l; l2 <= n; ++l2) {
      auto& col = out.hess[WeightSet::pack(spec.b_index(l), spec.b_index(l2), r)];
      const auto& jl = out.jac[spec.b_index(l)];
      const auto& jl2 = out.jac[spec.b_index(l2)];
      for (long s = 1; s <= N; ++s) {
        double f = 0.0;
        if (s - l2 >= 1) f += jl[s - l2 - 1];
        if (s - l >= 1) f += jl2[s - l - 1];
        col[s - 1] = f + ar.apply(col, s);
      }
    }
  if (has_d) {
    for (int l = 1; l <= n; ++l) {
      auto& col = out.hess[WeightSet::pack(spec.b_index(l), spec.d_index(), r)];
      const auto& jd = out.jac[spec.d_index()];
      for (long s = 1; s <= N; ++s) {
        const double f = (s - l >= 1) ? jd[s - l - 1] : 0.0;
        col[s - 1] = f + ar.apply(col, s);
      }
    }
    auto& col = out.hess[WeightSet::pack(spec.d_index(), spec.d_index(), r)];
    for (long s = 1; s <= N; ++s) {
      double f = 0.0;
      if (spec.family == Family::Fgarch) {
        for (long k = 1; k <= std::min<long>(m, s); ++k) f += a[k - 1] * D2[s - k];
      } else {
        f = D2[s - 1];
        for (long k = 1; k <= std::min<long>(m, s); ++k) f += a[k - 1] * gdd(s - k);
      }
      col[s - 1] = f + ar.apply(col, s);
    }
  }
}

void compute_kernel(const ModelSpec& spec, const std::vector<double>& zeta,
                    long N, int order, WeightSet& out) {
  const int m = spec.m;
  const int r = spec.zeta_dim();
  const bool hyp = (spec.family == Family::Ghyp);
  const double d = zeta[spec.d_index()];
  const double log_d = std::log(d);

  out.psi.assign(N, 0.0);
  if (order >= 1) out.jac.assign(r, std::vector<double>(N, 0.0));
  if (order >= 2) out.hess.assign(r * (r + 1) / 2, std::vector<double>(N, 0.0));

  const int di = spec.d_index();
  for (int i = 1; i <= m; ++i) {
    const double e = zeta[spec.e_index(i)];
    const double f = spec.shape_f(zeta, i);
    const double lgam = std::lgamma(f + 1.0);
    const double psi0 = (order >= 1 && spec.free_f) ? digamma(f + 1.0) : 0.0;
    const double psi1 = (order >= 2 && spec.free_f) ? trigamma(f + 1.0) : 0.0;

    for (long j = 1; j <= N; ++j) {
      double base, grad_d, dgrad_d_dd, grad_f = 0.0, dgrad_d_df = 0.0;
      if (!hyp) {
        // e_i d^{f+1} j^f exp(-d j) / Gamma(f+1)
        const double lj = std::log(static_cast<double>(j));
        base = std::exp((f + 1.0) * log_d + f * lj - d * j - lgam);
        grad_d = (f + 1.0) / d - j;
        dgrad_d_dd = -(f + 1.0) / (d * d);
        if (spec.free_f) {
          grad_f = log_d + lj - psi0;
          dgrad_d_df = 1.0 / d;
        }
      } else {
        // e_i d ln^f(j+1) (j+1)^{-d-1} / Gamma(f+1)
        const double lj1 = std::log(static_cast<double>(j + 1));
        base = std::exp(log_d + f * std::log(lj1) - (d + 1.0) * lj1 - lgam);
        grad_d = 1.0 / d - lj1;
        dgrad_d_dd = -1.0 / (d * d);
        if (spec.free_f) grad_f = std::log(lj1) - psi0;
      }

      const double term = e * base;
      out.psi[j - 1] += term;
      if (order >= 1) {
        out.jac[spec.e_index(i)][j - 1] = base;
        out.jac[di][j - 1] += term * grad_d;
        if (spec.free_f) out.jac[spec.f_index(i)][j - 1] = term * grad_f;
      }
      if (order >= 2) {
        out.hess[WeightSet::pack(spec.e_index(i), di, r)][j - 1] = base * grad_d;
        out.hess[WeightSet::pack(di, di, r)][j - 1] +=
            term * (grad_d * grad_d + dgrad_d_dd);
        if (spec.free_f) {
          out.hess[WeightSet::pack(spec.e_index(i), spec.f_index(i), r)][j - 1] =
              base * grad_f;
          out.hess[WeightSet::pack(spec.f_index(i), spec.f_index(i), r)][j - 1] =
              term * (grad_f * grad_f - psi1);
          out.hess[WeightSet::pack(spec.f_index(i), di, r)][j - 1] =
              term * (grad_f * grad_d + dgrad_d_df);
        }
      }
    }
  }
}

// Exponential-kernel weights underflow to exact zero at long lags; such a
// trailing zero run is not a positivity violation. Structural zeros
// (pure ARCH, negative FIGARCH expansions) are.
bool tolerate_zero_tail(const ModelSpec& spec) {
  return spec.family == Family::Gexp || spec.family == Family::Ghyp ||
         (spec.family == Family::Garch && spec.n >= 1);
}

void positivity_check(const ModelSpec& spec, const std::vector<double>& psi) {
  if (spec.family == Family::Zero) return;
  for (long j = 0; j < static_cast<long>(psi.size()); ++j) {
    if (psi[j] > 0.0) continue;
    if (psi[j] == 0.0 && tolerate_zero_tail(spec)) {
      bool all_zero = true;
      for (long k = j; k < static_cast<long>(psi.size()); ++k)
        if (psi[k] != 0.0) {
          all_zero = false;
          break;
        }
      if (all_zero) return;
    }
    throw positivity_error("weight psi_" + std::to_string(j + 1) +
                               " is not positive (" + std::to_string(psi[j]) + ")",
                           j + 1);
  }
}

}  // namespace

WeightSet weight_set(const ModelSpec& spec, const std::vector<double>& zeta,
                     long n, int order, bool check_positivity) {
  if (n < 1) throw std::domain_error("weight_set: n must be >= 1");
  spec.validate();
  spec.validate_zeta(zeta);
  WeightSet out;
  switch (spec.family) {
    case Family::Zero:
      out.psi.assign(n, 0.0);
      break;
    case Family::Garch:
    case Family::Fgarch:
    case Family::Figarch:
      compute_rational(spec, zeta, n, order, out);
      break;
    case Family::Gexp:
    case Family::Ghyp:
      compute_kernel(spec, zeta, n, order, out);
      break;
  }
  if (check_positivity) positivity_check(spec, out.psi);
  return out;
}

std::vector<double> weights(const ModelSpec& spec, const std::vector<double>& zeta,
                            long n) {
  return weight_set(spec, zeta, n, 0).psi;
}

Matrix weights_jacobian(const ModelSpec& spec, const std::vector<double>& zeta,
                        long n) {
  WeightSet ws = weight_set(spec, zeta, n, 1);
  const int r = spec.zeta_dim();
  Matrix jac(n, r);
  for (int k = 0; k < r; ++k)
    for (long j = 0; j < n; ++j) jac(j, k) = ws.jac[k][j];
  return jac;
}

std::vector<Matrix> weights_hessian(const ModelSpec& spec,
                                    const std::vector<double>& zeta, long n) {
  WeightSet ws = weight_set(spec, zeta, n, 2);
  const int r = spec.zeta_dim();
  std::vector<Matrix> h(n, Matrix(r, r));
  for (int k = 0; k < r; ++k)
    for (int l = k; l < r; ++l) {
      const auto& col = ws.hess[WeightSet::pack(k, l, r)];
      for (long j = 0; j < n; ++j) {
        h[j](k, l) = col[j];
        h[j](l, k) = col[j];
      }
    }
  return h;
}

AssumptionReport check_assumptions(const ModelSpec& spec,
                                   const std::vector<double>& zeta, long n,
                                   int window) {
  AssumptionReport rep;
  const int r = spec.zeta_dim();
  WeightSet ws = weight_set(spec, zeta, n, r > 0 ? 1 : 0, false);
  const auto& psi = ws.psi;

  rep.positive = true;
  for (long j = 0; j < n; ++j) {
    if (psi[j] > 0.0) continue;
    if (psi[j] == 0.0 && tolerate_zero_tail(spec)) {
      bool all_zero = true;
      for (long k = j; k < n; ++k)
        if (psi[k] != 0.0) {
          all_zero = false;
          break;
        }
      if (all_zero) break;
    }
    rep.positive = false;
    rep.first_nonpositive = j + 1;
    break;
  }

  long last_pos = -1;
  for (long j = 0; j < n; ++j)
    if (psi[j] > 0.0) last_pos = j;

  const double d = spec.has_d() ? zeta[spec.d_index()] : 0.0;
  rep.theoretical_tail_exponent = spec.hyperbolic_decay()
                                      ? d + 1.0
                                      : std::numeric_limits<double>::quiet_NaN();
  rep.clt_unsafe = spec.hyperbolic_decay() && d <= 0.5;

  if (last_pos >= 1) {
    // Tail regressions of log psi on log j and on j over the positive tail half.
    const long hi = last_pos + 1;  // 1-based
    const long lo = std::max<long>(1, hi / 2);
    const long count = hi - lo + 1;
    const long stride = std::max<long>(1, count / 2048);
    double sxx_h = 0, sxy_h = 0, sx_h = 0, sy = 0, sxx_e = 0, sxy_e = 0, sx_e = 0;
    long np = 0;
    for (long j = lo; j <= hi; j += stride) {
      if (!(psi[j - 1] > 0.0)) continue;
      const double y = std::log(psi[j - 1]);
      const double xh = std::log(static_cast<double>(j));
      const double xe = static_cast<double>(j);
      sx_h += xh;
      sx_e += xe;
      sy += y;
      sxx_h += xh * xh;
      sxy_h += xh * y;
      sxx_e += xe * xe;
      sxy_e += xe * y;
      ++np;
    }
    if (np >= 3) {
      const double slope_h = (np * sxy_h - sx_h * sy) / (np * sxx_h - sx_h * sx_h);
      const double slope_e = (np * sxy_e - sx_e * sy) / (np * sxx_e - sx_e * sx_e);
      rep.fitted_tail_exponent = -slope_h;
      // Compare the fits through their residual sums of squares.
      double ss_h = 0, ss_e = 0;
      const double ah = (sy - slope_h * sx_h) / np;
      const double ae = (sy - slope_e * sx_e) / np;
      for (long j = lo; j <= hi; j += stride) {
        if (!(psi[j - 1] > 0.0)) continue;
        const double y = std::log(psi[j - 1]);
        const double rh = y - (ah + slope_h * std::log(static_cast<double>(j)));
        const double re = y - (ae + slope_e * static_cast<double>(j));
        ss_h += rh * rh;
        ss_e += re * re;
      }
      rep.decay_exponential = ss_e < ss_h;
    }

    // Empirical K of the quasi-monotonicity bound psi_j <= K psi_k, k <= j.
    double running_min = psi[0];
    double kmax = 1.0;
    for (long j = 0; j <= last_pos; ++j) {
      if (!(psi[j] > 0.0)) break;
      kmax = std::max(kmax, psi[j] / running_min);
      running_min = std::min(running_min, psi[j]);
    }
    rep.quasi_monotonicity_K = kmax;

    if (spec.hyperbolic_decay()) {
      double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
      for (long j = lo; j <= hi; ++j) {
        const double v = psi[j - 1] * std::pow(static_cast<double>(j), d + 1.0);
        tmin = std::min(tmin, v);
        tmax = std::max(tmax, v);
      }
      rep.tail_ratio_min = tmin;
      rep.tail_ratio_max = tmax;
    }
  }

  // Greedy full-rank search over lags 1..window.
  if (r == 0) {
    rep.rank = 0;
    rep.full_rank = true;
    return rep;
  }
  const long w = std::min<long>(window, n);
  std::vector<long> selected;
  int rank = 0;
  for (long j = 1; j <= w && rank < r; ++j) {
    std::vector<long> cand = selected;
    cand.push_back(j);
    Matrix s(cand.size(), r);
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (int k = 0; k < r; ++k) s(i, k) = ws.jac[k][cand[i] - 1];
    const auto sv = singular_values(s);
    int nr = 0;
    for (double v : sv)
      if (v > 1e-10 * sv[0]) ++nr;
    // A single extra row can raise the rank by at most one.
    if (nr == rank + 1) {
      selected = cand;
      rank = nr;
    }
  }
  rep.rank = rank;
  rep.rank_rows = selected;
  rep.full_rank = (rank == r);
  if (rep.full_rank) {
    Matrix sq(r, r);
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < r; ++k) sq(i, k) = ws.jac[k][selected[i] - 1];
    rep.rank_det = determinant(sq);
  } else {
    rep.rank_det = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace archinf
