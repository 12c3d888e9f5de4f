#pragma once

#include <stdexcept>
#include <string>

namespace viscowave {

// Evaluation requested on or across a branch cut / outside the analytic domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A contour passed too close to a zero to count windings reliably.
struct BoundaryTooClose : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solver did not reach its tolerance.
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A certification window did not contain exactly the expected zero count.
struct CertificationMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The closed-form denominator of the boundary-value solution degenerated.
struct DegenerateDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mode cluster does not fit the requested frequency window.
struct WindowViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A decay scenario is inconsistent with the kernel's spectral classification.
struct ScenarioMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A sampled function required to be monotone is not.
struct NonMonotone : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time step violates the stability bound of the explicit scheme.
struct CFLViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace viscowave
