#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace archinf {

using Series = std::vector<double>;

enum class Family { Garch, Fgarch, Figarch, Gexp, Ghyp, Zero };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Which weight family to use and its structural orders. The parameter block
// layout (see zeta_dim / coord_names) is:
//   Garch:          a_1..a_m, b_1..b_n
//   Fgarch/Figarch: a_1..a_m, b_1..b_n, d
//   Gexp/Ghyp:      e_1..e_m [, f_1..f_m if free_f], d
//   Zero:           (empty; test-only family with all weights zero)
struct ModelSpec {
  Family family = Family::Zero;
  int m = 0;
  int n = 0;
  bool free_f = false;
  std::vector<double> fixed_f;  // shape exponents when not estimated

  int zeta_dim() const;
  int theta_dim() const { return zeta_dim() + 2; }

  bool hyperbolic_decay() const {
    return family == Family::Fgarch || family == Family::Figarch ||
           family == Family::Ghyp;
  }
  bool has_d() const { return family != Family::Garch && family != Family::Zero; }

  // Offsets into the zeta block.
  int a_index(int j) const { return j - 1; }            // j = 1..m
  int b_index(int j) const { return m + j - 1; }        // j = 1..n
  int e_index(int i) const { return i - 1; }            // i = 1..m
  int f_index(int i) const { return m + i - 1; }        // only when free_f
  int d_index() const;

  // Shape exponent f_i as a function of zeta (fixed or free).
  double shape_f(const std::vector<double>& zeta, int i) const;

  // Structural invariants: admissible orders and fixed_f shape.
  void validate() const;

  // Family box membership for a concrete zeta; throws std::domain_error
  // or stability_error with a descriptive message.
  void validate_zeta(const std::vector<double>& zeta) const;

  std::vector<std::string> coord_names() const;  // omega, mu, then zeta
};

struct Bounds {
  std::vector<double> lo, hi;  // length theta_dim, order (omega, mu, zeta)

  void validate(const ModelSpec& spec) const;
  bool contains(const std::vector<double>& theta_flat) const;
  std::vector<double> center() const;
  std::vector<double> clamp(std::vector<double> theta_flat) const;
};

// theta = (omega, mu, zeta) with its box.
struct ParamVector {
  double omega = 1.0;
  double mu = 0.0;
  std::vector<double> zeta;
  Bounds bounds;

  std::vector<double> flat() const;
  static ParamVector from_flat(const std::vector<double>& v, Bounds bounds);
};

}  // namespace archinf
