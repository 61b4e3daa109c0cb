#pragma once

#include <stdexcept>
#include <string>

namespace lambertcreep {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iteration failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Argument lies on the branch cut where the function is two-valued;
/// a one-sided limit must be requested instead.
class CutError : public Error {
 public:
  using Error::Error;
};

/// The selected numerical method cannot evaluate the given operand
/// (e.g. a contour method applied to a real-axis-only transform).
class MethodError : public Error {
 public:
  using Error::Error;
};

/// Sample grid is malformed or too coarse for the requested audit.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure; message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lambertcreep
