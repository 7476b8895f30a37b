#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridbie {

/// Resolution too coarse for the geometry, or the level set is malformed.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural misuse of a grid field (wrong side, missing extension value).
class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative or direct solve failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double residual,
              std::vector<double> history = {})
      : std::runtime_error(what),
        iterations_(iterations),
        residual_(residual),
        history_(std::move(history)) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  /// Residual after each iteration, when the solver records one.
  const std::vector<double>& history() const { return history_; }

 private:
  int iterations_;
  double residual_;
  std::vector<double> history_;
};

/// Invalid parameters, unknown names, or size caps exceeded.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A boundary operator received data outside its domain (e.g. not in F_#).
class OperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gridbie
