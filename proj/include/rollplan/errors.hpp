#ifndef ROLLPLAN_ERRORS_HPP
#define ROLLPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rollplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A formula was evaluated at (or numerically on top of) one of its poles.
class PoleError : public Error {
public:
  using Error::Error;
};

/// An inverse-trig argument left [-1, 1] by more than the clamp band.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A radicand in the minimum-distance chain went negative.
class NumericalDomain : public Error {
public:
  using Error::Error;
};

/// The goal violates the assumptions the distance formulas were derived under.
class InvalidGoal : public Error {
public:
  using Error::Error;
};

/// The steering angle is undefined (zero torsion input).
class SteeringSingularity : public Error {
public:
  using Error::Error;
};

/// The adaptive integrator could not make progress.
class StepFailure : public Error {
public:
  using Error::Error;
};

/// A tuning update divided by a vanishing length.
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// Smooth time scaling hit a vanishing spin input.
class SingularScale : public Error {
public:
  using Error::Error;
};

/// A re-timed solve did not reproduce the planned paths.
class PathDrift : public Error {
public:
  using Error::Error;
};

/// Configuration file could not be read or validated.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace rollplan

#endif // ROLLPLAN_ERRORS_HPP
