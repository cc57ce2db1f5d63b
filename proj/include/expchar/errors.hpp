// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace expchar {

/// Base class for all library errors.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain (non-positive rate, p outside (0,1), ...).
class ParameterDomainError : public Error {
  using Error::Error;
};

/// A requested moment order is not representable for the family in double precision.
class MomentDomainError : public Error {
  using Error::Error;
};

/// Reciprocal of a truncated series whose constant term vanishes.
class SingularSeriesError : public Error {
  using Error::Error;
};

/// An order-by-order solve hit a vanishing pivot; carries the offending order.
class NonUniquenessError : public Error {
 public:
  NonUniquenessError(int order, const std::string& what) : Error(what), order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// Weighted-metric integrand is not integrable for the given envelope exponents.
class DivergenceError : public Error {
  using Error::Error;
};

/// Derived contraction factor rho >= 1.
class ContractionFailureError : public Error {
  using Error::Error;
};

/// Observed operator ratio exceeded rho + tolerance.
class ContractionViolationError : public Error {
  using Error::Error;
};

/// Sample unusable for the requested statistic (e.g. all values equal).
class DegenerateSampleError : public Error {
  using Error::Error;
};

/// Equal-count binning produced an empty bin.
class BinningError : public Error {
  using Error::Error;
};

/// A statistical routine was called with inputs that violate its contract.
class MisuseError : public Error {
  using Error::Error;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public Error {
  using Error::Error;
};

}  // namespace expchar
