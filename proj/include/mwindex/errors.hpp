#ifndef MWINDEX_ERRORS_HPP
#define MWINDEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mwindex {

/// Invalid argument value (non-positive mass, negative C6, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Operation asked for a potential branch it cannot handle.
class UnsupportedPotentialError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Radial integration failed; carries solver diagnostics.
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& msg, long steps, double matching_residual)
      : std::runtime_error(msg), steps(steps),
        matching_residual(matching_residual) {}
  long steps;
  double matching_residual;
};

/// Adaptive quadrature exhausted its interval budget.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& msg, double achieved, double requested)
      : std::runtime_error(msg), achieved(achieved), requested(requested) {}
  double achieved;
  double requested;
};

/// Malformed run configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace mwindex

#endif
