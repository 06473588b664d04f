#include "archinf/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "archinf/errors.hpp"
#include "poly.hpp"

namespace archinf {

std::string family_name(Family f) {
  switch (f) {
    case Family::Garch: return "garch";
    case Family::Fgarch: return "fgarch";
    case Family::Figarch: return "figarch";
    case Family::Gexp: return "gexp";
    case Family::Ghyp: return "ghyp";
    case Family::Zero: return "zero";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "garch") return Family::Garch;
  if (name == "fgarch") return Family::Fgarch;
  if (name == "figarch") return Family::Figarch;
  if (name == "gexp") return Family::Gexp;
  if (name == "ghyp") return Family::Ghyp;
  if (name == "zero") return Family::Zero;
  throw std::domain_error("unknown family: " + name);
}

int ModelSpec::zeta_dim() const {
  switch (family) {
    case Family::Garch: return m + n;
    case Family::Fgarch:
    case Family::Figarch: return m + n + 1;
    case Family::Gexp:
    case Family::Ghyp: return m + (free_f ? m : 0) + 1;
    case Family::Zero: return 0;
  }
  return 0;
}

int ModelSpec::d_index() const {
  switch (family) {
    case Family::Fgarch:
    case Family::Figarch: return m + n;
    case Family::Gexp:
    case Family::Ghyp: return m + (free_f ? m : 0);
    default: throw std::logic_error("d_index: family has no d parameter");
  }
}

double ModelSpec::shape_f(const std::vector<double>& zeta, int i) const {
  if (free_f) return zeta[f_index(i)];
  return fixed_f[i - 1];
}

void ModelSpec::validate() const {
  switch (family) {
    case Family::Garch:
      if (m < 1 || n < 0) throw std::domain_error("garch requires m >= 1, n >= 0");
      break;
    case Family::Fgarch:
      if (m < 1 || n < 0) throw std::domain_error("fgarch requires m >= 1, n >= 0");
      break;
    case Family::Figarch:
      if (m < 0 || n < 0) throw std::domain_error("figarch requires m >= 0, n >= 0");
      break;
    case Family::Gexp:
    case Family::Ghyp:
      if (m < 1) throw std::domain_error(family_name(family) + " requires m >= 1");
      if (!free_f && static_cast<int>(fixed_f.size()) != m)
        throw std::domain_error("fixed shape exponents must have length m");
      if (!free_f) {
        double prev = -1.0;
        for (double f : fixed_f) {
          if (!(f >= 0.0)) throw std::domain_error("shape exponents must be >= 0");
          if (f < prev) throw std::domain_error("shape exponents must be nondecreasing");
          prev = f;
        }
      }
      break;
    case Family::Zero:
      break;
  }
}

void ModelSpec::validate_zeta(const std::vector<double>& zeta) const {
  if (static_cast<int>(zeta.size()) != zeta_dim())
    throw std::domain_error("zeta has wrong length for family");
  switch (family) {
    case Family::Zero:
      return;
    case Family::Garch:
    case Family::Fgarch:
    case Family::Figarch: {
      for (int j = 1; j <= m; ++j)
        if (!(zeta[a_index(j)] > 0.0)) throw std::domain_error("a coefficients must be positive");
      for (int j = 1; j <= n; ++j)
        if (!(zeta[b_index(j)] > 0.0)) throw std::domain_error("b coefficients must be positive");
      if (family != Family::Garch) {
        const double d = zeta[d_index()];
        if (!(d > 0.0 && d < 1.0))
          throw std::domain_error("fractional exponent d must lie in (0,1)");
      }
      if (n >= 1) {
        std::vector<double> b(zeta.begin() + m, zeta.begin() + m + n);
        const double min_mod = detail::lag_poly_min_root_modulus(b);
        if (!(min_mod > 1.0 + 1e-8))
          throw stability_error("denominator polynomial has a root inside |z| <= 1+1e-8");
        if (m >= 1) {
          // No (numerically) common zeros between numerator and denominator.
          std::vector<double> ac(m + 1, 0.0);
          for (int j = 1; j <= m; ++j) ac[j] = zeta[a_index(j)];
          auto a_roots = detail::poly_roots(ac);
          auto b_roots = detail::lag_poly_roots(b);
          for (const auto& ra : a_roots)
            for (const auto& rb : b_roots)
              if (std::abs(ra - rb) < 1e-8)
                throw stability_error("numerator and denominator share a zero");
        }
      }
      return;
    }
    case Family::Gexp:
    case Family::Ghyp: {
      for (int i = 1; i <= m; ++i)
        if (!(zeta[e_index(i)] > 0.0)) throw std::domain_error("e coefficients must be positive");
      for (int i = 1; i <= m; ++i)
        if (!(shape_f(zeta, i) >= 0.0)) throw std::domain_error("shape exponents must be >= 0");
      const double d = zeta[d_index()];
      if (!(d > 0.0)) throw std::domain_error("decay rate d must be positive");
      return;
    }
  }
}

std::vector<std::string> ModelSpec::coord_names() const {
  std::vector<std::string> names = {"omega", "mu"};
  switch (family) {
    case Family::Garch:
    case Family::Fgarch:
    case Family::Figarch:
      for (int j = 1; j <= m; ++j) names.push_back("a" + std::to_string(j));
      for (int j = 1; j <= n; ++j) names.push_back("b" + std::to_string(j));
      if (family != Family::Garch) names.push_back("d");
      break;
    case Family::Gexp:
    case Family::Ghyp:
      for (int i = 1; i <= m; ++i) names.push_back("e" + std::to_string(i));
      if (free_f)
        for (int i = 1; i <= m; ++i) names.push_back("f" + std::to_string(i));
      names.push_back("d");
      break;
    case Family::Zero:
      break;
  }
  return names;
}

void Bounds::validate(const ModelSpec& spec) const {
  const std::size_t dim = static_cast<std::size_t>(spec.theta_dim());
  if (lo.size() != dim || hi.size() != dim)
    throw std::domain_error("bounds must have one [lo,hi] pair per coordinate");
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(lo[i] < hi[i])) throw std::domain_error("bounds must satisfy lo < hi");
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw std::domain_error("bounds must be finite");
  }
  if (!(lo[0] > 0.0)) throw std::domain_error("omega lower bound must be positive");
}

bool Bounds::contains(const std::vector<double>& theta_flat) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (theta_flat[i] < lo[i] || theta_flat[i] > hi[i]) return false;
  return true;
}

std::vector<double> Bounds::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

std::vector<double> Bounds::clamp(std::vector<double> theta_flat) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    theta_flat[i] = std::min(hi[i], std::max(lo[i], theta_flat[i]));
  return theta_flat;
}

std::vector<double> ParamVector::flat() const {
  std::vector<double> v;
  v.reserve(zeta.size() + 2);
  v.push_back(omega);
  v.push_back(mu);
  v.insert(v.end(), zeta.begin(), zeta.end());
  return v;
}

ParamVector ParamVector::from_flat(const std::vector<double>& v, Bounds bounds) {
  ParamVector p;
  p.omega = v[0];
  p.mu = v[1];
  p.zeta.assign(v.begin() + 2, v.end());
  p.bounds = std::move(bounds);
  return p;
}

}  // namespace archinf
