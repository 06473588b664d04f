#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace archinf {

// Invalid configuration input (bad model file, malformed flags, missing
// fields); messages carry the offending field path.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when the moving-average style denominator polynomial has a root on
// or inside the closed unit disk (margin 1e-8).
class stability_error : public std::runtime_error {
 public:
  explicit stability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a weight sequence that must be strictly positive is not.
class positivity_error : public std::runtime_error {
 public:
  positivity_error(const std::string& msg, long index)
      : std::runtime_error(msg), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

// Conditional variance left the representable range during simulation.
class simulation_overflow_error : public std::runtime_error {
 public:
  simulation_overflow_error(const std::string& msg, long t)
      : std::runtime_error(msg), t_(t) {}
  long t() const { return t_; }

 private:
  long t_;
};

// Averaged Hessian too close to singular for sandwich inversion.
class singular_hessian_error : public std::runtime_error {
 public:
  singular_hessian_error(const std::string& msg, std::vector<double> eigenvalues)
      : std::runtime_error(msg), eigenvalues_(std::move(eigenvalues)) {}
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  std::vector<double> eigenvalues_;
};

}  // namespace archinf
