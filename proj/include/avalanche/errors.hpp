#pragma once

#include <stdexcept>
#include <string>

namespace aval {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class FrameError : public Error {
 public:
  using Error::Error;
};

class GapError : public Error {
 public:
  using Error::Error;
};

class KernelError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ForgeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Raised when a sum, intersection or flag decomposition is requested for
// subspaces that are not transversal enough; carries the measured value.
class TransversalityError : public Error {
 public:
  TransversalityError(const std::string& what, double theta)
      : Error(what), theta_(theta) {}
  double theta() const { return theta_; }

 private:
  double theta_;
};

}  // namespace aval
