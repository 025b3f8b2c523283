// Exception types shared across the library. Each maps to one failure mode of
// the numerical contracts (solvability, positivity, selfadjointness, step
// control); callers catch the base hf::Error for blanket handling.
#pragma once

#include <stdexcept>
#include <string>

namespace hf {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid shapes or ranks of two operands disagree.
struct ShapeMismatch : Error {
  using Error::Error;
};

// Poisson right-hand side has a nonzero mean beyond tolerance: the equation
// box0(u) = rhs has no periodic solution (constants span the kernel).
struct SolvabilityViolation : Error {
  using Error::Error;
};

// An operand required to be selfadjoint with respect to the relevant metric
// fails the check beyond tolerance.
struct SelfadjointnessViolation : Error {
  using Error::Error;
};

// A matrix logarithm was requested for an operator without positive spectrum.
struct SpectrumNotPositive : Error {
  using Error::Error;
};

// A claimed metric has a non-positive determinant somewhere on the grid.
struct NonPositiveDeterminant : Error {
  using Error::Error;
};

// The flow integrator halved its step 20 times in a row without producing an
// acceptable metric.
struct StepCollapse : Error {
  using Error::Error;
};

// The evolving metric's condition number exceeded 1e12.
struct DivergedMetric : Error {
  using Error::Error;
};

// Catalog lookup with an unregistered name.
struct UnknownEntry : Error {
  using Error::Error;
};

// Degree/rank data passed to the exact-sequence balance check are not additive.
struct InconsistentSequence : Error {
  using Error::Error;
};

}  // namespace hf
