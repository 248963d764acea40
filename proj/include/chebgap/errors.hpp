#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chebgap {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad intervals, out-of-range parameters, bad config.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// An iterative or quadrature procedure failed to reach its tolerance.
/// `residuals` carries whatever the failing stage could report.
class NumericalError : public Error {
  public:
    NumericalError(const std::string& what, std::vector<double> residuals = {})
        : Error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

  private:
    std::vector<double> residuals_;
};

/// Request outside what standard precision supports (e.g. degree above cap).
class CapabilityError : public Error {
  public:
    using Error::Error;
};

/// A mathematical invariant failed beyond tolerance; indicates a solver bug.
class InvariantError : public Error {
  public:
    using Error::Error;
};

} // namespace chebgap
