#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lkh {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

/// Numerical thresholds shared by every module.
struct Tolerances {
  double zero_coeff = 1e-12;   // relative "zero coefficient" test for jets
  double rank = 1e-9;          // relative singular-value cut for spans/null spaces
  double check = 1e-10;        // residual bound for verified identities
  double nondegenerate = 1e-9; // |det| / singular-value floor for metrics and forms
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct DivisibilityError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
struct DegeneracyError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct DescriptorError : Error {
  using Error::Error;
};
struct PatternError : Error {
  using Error::Error;
};
struct IterationError : Error {
  using Error::Error;
};
struct InsufficientOrderError : Error {
  using Error::Error;
};

inline constexpr const char* library_version() {
#ifdef LKH_VERSION
  return LKH_VERSION;
#else
  return "0.1.0";
#endif
}

}  // namespace lkh
