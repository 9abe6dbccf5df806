#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace aglercert {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Contract violations: bad degree boxes, mismatched variable counts, ...
struct DegreeError : Error {
  using Error::Error;
};

// Input fails a pointwise nonnegativity / PSD precondition.
struct NotPSDError : Error {
  NotPSDError(const std::string& what, std::vector<std::complex<double>> w,
              double eig)
      : Error(what), witness(std::move(w)), eigenvalue(eig) {}
  std::vector<std::complex<double>> witness;
  double eigenvalue = 0.0;
};

struct NegativeInputError : Error {
  NegativeInputError(const std::string& what, double m) : Error(what), minimum(m) {}
  double minimum = 0.0;
};

struct NoConvergenceError : Error {
  NoConvergenceError(const std::string& what, double diff)
      : Error(what), last_diff(diff) {}
  double last_diff = 0.0;
};

struct DenominatorZeroError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace aglercert
