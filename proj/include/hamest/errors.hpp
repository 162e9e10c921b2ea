#pragma once

#include <stdexcept>
#include <string>

namespace hamest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

// Two eigenvalues closer than the relative degeneracy threshold.
class DegenerateSpectrum : public Error {
 public:
  DegenerateSpectrum(double gap, double threshold)
      : Error("degenerate spectrum: eigenvalue gap " + std::to_string(gap) +
              " below threshold " + std::to_string(threshold)),
        gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class GaugeMatchFailure : public Error {
 public:
  using Error::Error;
};

// A probability vanishes while its derivative does not: the model leaves its
// support and the Fisher information is not a meaningful summary.
class SupportBoundary : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamest
