#ifndef LSTS_ERRORS_HPP
#define LSTS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lsts {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroDeterminant : public Error {
 public:
  ZeroDeterminant() : Error("pattern matrix is singular (det M = 0)") {}
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t expected, std::size_t got)
      : Error("length mismatch: expected " + std::to_string(expected) +
              " values, got " + std::to_string(got)) {}
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class NotReduced : public Error {
 public:
  using Error::Error;
};

/// A frequency class whose bracket sum of |c_k|^2 vanishes.
class DegenerateClass : public Error {
 public:
  DegenerateClass(std::size_t cls, const std::string& frequency)
      : Error("degenerate frequency class " + frequency +
              ": translates are linearly dependent"),
        class_index(cls) {}
  std::size_t class_index;
};

class NoInterpolant : public Error {
 public:
  NoInterpolant(std::size_t cls, const std::string& frequency)
      : Error("fundamental interpolant does not exist: bracket sum vanishes at " +
              frequency),
        class_index(cls) {}
  std::size_t class_index;
};

class InvalidMaterial : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularAcousticTensor : public Error {
 public:
  using Error::Error;
};

class KernelNotOrthonormal : public Error {
 public:
  explicit KernelNotOrthonormal(double defect)
      : Error("coefficient table is not orthonormalised (max |m[|c|^2]_h - 1| = " +
              std::to_string(defect) + ")") {}
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NonElliptic : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  NotConverged(int iterations, double residual)
      : Error("fixed-point iteration did not converge after " +
              std::to_string(iterations) + " iterations (last Cauchy error " +
              std::to_string(residual) + ")"),
        iterations(iterations),
        residual(residual) {}
  int iterations;
  double residual;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

class PatternMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line(line) {}
  int line;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IOError : public Error {
 public:
  using Error::Error;
};

}  // namespace lsts

#endif  // LSTS_ERRORS_HPP
