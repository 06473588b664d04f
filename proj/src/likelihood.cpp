#include "archinf/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "archinf/weights.hpp"

namespace archinf {

namespace {

// out[i] = sum_{j=1..min(i,L)} k[j-1] * s[i-j]
void causal_conv(const double* k, long L, const double* s, long T, double* out) {
  for (long i = 0; i < T; ++i) {
    const long lim = std::min(i, L);
    const double* sp = s + i;
    double acc = 0.0;
    for (long j = 1; j <= lim; ++j) acc += k[j - 1] * sp[-j];
    out[i] = acc;
  }
}

// Same sweep for up to four kernels sharing one signal; the signal element is
// loaded once per (i, j).
void causal_conv4(const double* k0, const double* k1, const double* k2,
                  const double* k3, long L, const double* s, long T, double* o0,
                  double* o1, double* o2, double* o3) {
  for (long i = 0; i < T; ++i) {
    const long lim = std::min(i, L);
    const double* sp = s + i;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    for (long j = 1; j <= lim; ++j) {
      const double sv = sp[-j];
      a0 += k0[j - 1] * sv;
      if (k1) a1 += k1[j - 1] * sv;
      if (k2) a2 += k2[j - 1] * sv;
      if (k3) a3 += k3[j - 1] * sv;
    }
    o0[i] = a0;
    if (o1) o1[i] = a1;
    if (o2) o2[i] = a2;
    if (o3) o3[i] = a3;
  }
}

void conv_group(const std::vector<const double*>& kernels, long L, const double* s,
                long T, const std::vector<double*>& outs) {
  std::size_t i = 0;
  while (i < kernels.size()) {
    const std::size_t left = kernels.size() - i;
    if (left >= 4) {
      causal_conv4(kernels[i], kernels[i + 1], kernels[i + 2], kernels[i + 3], L, s,
                   T, outs[i], outs[i + 1], outs[i + 2], outs[i + 3]);
      i += 4;
    } else if (left == 3) {
      causal_conv4(kernels[i], kernels[i + 1], kernels[i + 2], nullptr, L, s, T,
                   outs[i], outs[i + 1], outs[i + 2], nullptr);
      i += 3;
    } else if (left == 2) {
      causal_conv4(kernels[i], kernels[i + 1], nullptr, nullptr, L, s, T, outs[i],
                   outs[i + 1], nullptr, nullptr);
      i += 2;
    } else {
      causal_conv(kernels[i], L, s, T, outs[i]);
      i += 1;
    }
  }
}

long effective_length(const std::vector<double>& psi) {
  long len = static_cast<long>(psi.size());
  while (len > 0 && psi[len - 1] == 0.0) --len;
  return len;
}

}  // namespace

std::vector<double> sigma_bar_sq(const ParamVector& theta, const Series& y,
                                 std::span<const double> psi) {
  const long T = static_cast<long>(y.size());
  std::vector<double> x2(T);
  for (long i = 0; i < T; ++i) {
    const double x = y[i] - theta.mu;
    x2[i] = x * x;
  }
  std::vector<double> out(T);
  causal_conv(psi.data(), static_cast<long>(psi.size()), x2.data(), T, out.data());
  for (long i = 0; i < T; ++i) out[i] += theta.omega;
  return out;
}

struct LikelihoodEvaluator::Work {
  std::vector<double> x, x2;
  std::vector<double> s2;                    // sigma_bar^2
  std::vector<double> conv_x;                // sum psi_j x_{t-j}
  std::vector<std::vector<double>> conv_j;   // sum psi^(1)_jk x^2_{t-j}
  std::vector<std::vector<double>> conv_jx;  // sum psi^(1)_jk x_{t-j}
  std::vector<std::vector<double>> conv_h;   // sum psi^(2) x^2_{t-j} (packed)
  std::vector<double> pref;                  // sum_{j<=min(t-1,L)} psi_j
  WeightSet w;
  long L = 0;
};

LikelihoodEvaluator::LikelihoodEvaluator(ModelSpec spec, Series y, long n_weights)
    : spec_(std::move(spec)), y_(std::move(y)) {
  const long T = static_cast<long>(y_.size());
  if (T < 1) throw std::domain_error("likelihood: series is empty");
  window_ = (n_weights < 0) ? T - 1 : std::min<long>(n_weights, T - 1);
}

// order 0: variance only; 1: + score pieces; 2: + hessian pieces.
void LikelihoodEvaluator::prepare(const ParamVector& theta, int order, Work& w) {
  const long T = static_cast<long>(y_.size());
  const int r = spec_.zeta_dim();

  w.x.resize(T);
  w.x2.resize(T);
  for (long i = 0; i < T; ++i) {
    w.x[i] = y_[i] - theta.mu;
    w.x2[i] = w.x[i] * w.x[i];
  }

  if (window_ > 0) {
    w.w = weight_set(spec_, theta.zeta, window_, order >= 1 ? order : 0);
  } else {
    w.w = WeightSet{};
    w.w.psi.clear();
    w.w.jac.assign(r, {});
    w.w.hess.assign(r * (r + 1) / 2, {});
  }
  w.L = effective_length(w.w.psi);

  w.s2.resize(T);
  std::vector<const double*> kernels;
  std::vector<double*> outs;

  kernels.push_back(w.w.psi.data());
  outs.push_back(w.s2.data());
  if (order >= 1) {
    w.conv_j.assign(r, std::vector<double>(T));
    for (int k = 0; k < r; ++k) {
      kernels.push_back(w.w.jac[k].data());
      outs.push_back(w.conv_j[k].data());
    }
  }
  if (order >= 2) {
    const int np = r * (r + 1) / 2;
    w.conv_h.assign(np, std::vector<double>(T));
    for (int p = 0; p < np; ++p) {
      kernels.push_back(w.w.hess[p].data());
      outs.push_back(w.conv_h[p].data());
    }
  }
  conv_group(kernels, w.L, w.x2.data(), T, outs);
  for (long i = 0; i < T; ++i) w.s2[i] += theta.omega;

  if (order >= 1) {
    kernels.clear();
    outs.clear();
    w.conv_x.resize(T);
    kernels.push_back(w.w.psi.data());
    outs.push_back(w.conv_x.data());
    if (order >= 2) {
      w.conv_jx.assign(r, std::vector<double>(T));
      for (int k = 0; k < r; ++k) {
        kernels.push_back(w.w.jac[k].data());
        outs.push_back(w.conv_jx[k].data());
      }
    }
    conv_group(kernels, w.L, w.x.data(), T, outs);
  }

  if (order >= 2) {
    w.pref.resize(T);
    double run = 0.0;
    // pref[i] = sum_{j=1..min(i,L)} psi_j
    for (long i = 0; i < T; ++i) {
      if (i >= 1 && i <= w.L) run += w.w.psi[i - 1];
      w.pref[i] = run;
    }
  }
}

double LikelihoodEvaluator::value(const ParamVector& theta) {
  Work w;
  prepare(theta, 0, w);
  const long T = static_cast<long>(y_.size());
  double q = 0.0;
  for (long i = 0; i < T; ++i) q += w.x2[i] / w.s2[i] + std::log(w.s2[i]);
  return q / static_cast<double>(T);
}

double LikelihoodEvaluator::value_and_gradient(const ParamVector& theta,
                                               std::vector<double>& grad) {
  Work w;
  prepare(theta, 1, w);
  const long T = static_cast<long>(y_.size());
  const int r = spec_.zeta_dim();
  const int dim = r + 2;
  grad.assign(dim, 0.0);
  double q = 0.0;
  for (long i = 0; i < T; ++i) {
    const double inv = 1.0 / w.s2[i];
    const double chi = w.x2[i] * inv;
    const double c1 = 1.0 - chi;
    q += chi + std::log(w.s2[i]);
    grad[0] += inv * c1;
    grad[1] += (-2.0 * w.conv_x[i] * inv) * c1 - 2.0 * w.x[i] * inv;
    for (int k = 0; k < r; ++k) grad[2 + k] += w.conv_j[k][i] * inv * c1;
  }
  const double tin = 1.0 / static_cast<double>(T);
  for (double& g : grad) g *= tin;
  return q * tin;
}

ScoreResult LikelihoodEvaluator::score(const ParamVector& theta) {
  Work w;
  prepare(theta, 1, w);
  const long T = static_cast<long>(y_.size());
  const int r = spec_.zeta_dim();
  const int dim = r + 2;
  ScoreResult res;
  res.per_t = Matrix(T, dim);
  res.mean.assign(dim, 0.0);
  for (long i = 0; i < T; ++i) {
    const double inv = 1.0 / w.s2[i];
    const double chi = w.x2[i] * inv;
    const double c1 = 1.0 - chi;
    res.per_t(i, 0) = inv * c1;
    res.per_t(i, 1) = (-2.0 * w.conv_x[i] * inv) * c1 - 2.0 * w.x[i] * inv;
    for (int k = 0; k < r; ++k) res.per_t(i, 2 + k) = w.conv_j[k][i] * inv * c1;
    for (int c = 0; c < dim; ++c) res.mean[c] += res.per_t(i, c);
  }
  for (double& m : res.mean) m /= static_cast<double>(T);
  return res;
}

LikelihoodEvaluator::TauSigma LikelihoodEvaluator::tau_sigma(const ParamVector& theta) {
  Work w;
  prepare(theta, 1, w);
  const long T = static_cast<long>(y_.size());
  const int r = spec_.zeta_dim();
  const int dim = r + 2;
  TauSigma res;
  res.tau = Matrix(T, dim);
  res.s2 = w.s2;
  for (long i = 0; i < T; ++i) {
    const double inv = 1.0 / w.s2[i];
    res.tau(i, 0) = inv;
    res.tau(i, 1) = -2.0 * w.conv_x[i] * inv;
    for (int k = 0; k < r; ++k) res.tau(i, 2 + k) = w.conv_j[k][i] * inv;
  }
  return res;
}

LikelihoodEvaluator::Curvature LikelihoodEvaluator::curvature(const ParamVector& theta) {
  Work w;
  prepare(theta, 2, w);
  const long T = static_cast<long>(y_.size());
  const int r = spec_.zeta_dim();
  const int dim = r + 2;
  Matrix H(dim, dim), G(dim, dim);
  std::vector<double> tau(dim), u(dim), s2d(dim * dim);

  for (long i = 0; i < T; ++i) {
    const double inv = 1.0 / w.s2[i];
    const double chi = w.x2[i] * inv;
    const double c1 = 1.0 - chi;

    tau[0] = inv;
    tau[1] = -2.0 * w.conv_x[i] * inv;
    for (int k = 0; k < r; ++k) tau[2 + k] = w.conv_j[k][i] * inv;

    // nu = d x_t^2 / d theta = -2 x_t e_2
    const double nu1 = -2.0 * w.x[i];

    for (int c = 0; c < dim; ++c) u[c] = tau[c] * c1;
    u[1] += nu1 * inv;

    // sigma_bar^{2(2)} entries (only mu and zeta blocks are nonzero).
    std::fill(s2d.begin(), s2d.end(), 0.0);
    s2d[1 * dim + 1] = 2.0 * w.pref[i];
    for (int k = 0; k < r; ++k) {
      const double v = -2.0 * w.conv_jx[k][i];
      s2d[1 * dim + (2 + k)] = v;
      s2d[(2 + k) * dim + 1] = v;
    }
    for (int k = 0; k < r; ++k)
      for (int l = k; l < r; ++l) {
        const double v = w.conv_h[WeightSet::pack(k, l, r)][i];
        s2d[(2 + k) * dim + (2 + l)] = v;
        s2d[(2 + l) * dim + (2 + k)] = v;
      }

    const double tcoef = 2.0 * chi - 1.0;
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) {
        double h = c1 * s2d[a * dim + b] * inv + tcoef * tau[a] * tau[b];
        if (a == 1) h -= nu1 * tau[b] * inv;
        if (b == 1) h -= tau[a] * nu1 * inv;
        if (a == 1 && b == 1) h += 2.0 * inv;
        H(a, b) += h;
        G(a, b) += u[a] * u[b];
      }
  }
  const double tin = 1.0 / static_cast<double>(T);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) {
      H(a, b) *= tin;
      H(b, a) = H(a, b);
      G(a, b) *= tin;
      G(b, a) = G(a, b);
    }
  return {H, G};
}

Matrix LikelihoodEvaluator::hessian(const ParamVector& theta) {
  return curvature(theta).hessian;
}

Matrix LikelihoodEvaluator::outer_product(const ParamVector& theta) {
  ScoreResult s = score(theta);
  const long T = static_cast<long>(y_.size());
  const int dim = static_cast<int>(s.mean.size());
  Matrix G(dim, dim);
  for (long i = 0; i < T; ++i)
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) G(a, b) += s.per_t(i, a) * s.per_t(i, b);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) {
      G(a, b) /= static_cast<double>(T);
      G(b, a) = G(a, b);
    }
  return G;
}

double qll(const ModelSpec& spec, const ParamVector& theta, const Series& y,
           long n_weights) {
  return LikelihoodEvaluator(spec, y, n_weights).value(theta);
}

ScoreResult score(const ModelSpec& spec, const ParamVector& theta, const Series& y,
                  long n_weights) {
  return LikelihoodEvaluator(spec, y, n_weights).score(theta);
}

Matrix hessian(const ModelSpec& spec, const ParamVector& theta, const Series& y,
               long n_weights) {
  return LikelihoodEvaluator(spec, y, n_weights).hessian(theta);
}

Matrix outer_product(const ModelSpec& spec, const ParamVector& theta,
                     const Series& y, long n_weights) {
  return LikelihoodEvaluator(spec, y, n_weights).outer_product(theta);
}

}  // namespace archinf
