#pragma once

#include <stdexcept>
#include <string>

namespace snf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input, dimension and domain errors: the caller passed something malformed.
class UsageError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public UsageError {
 public:
  using UsageError::UsageError;
};

class DomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

class EmptyPolynomial : public UsageError {
 public:
  using UsageError::UsageError;
};

class NonterminatingSeries : public UsageError {
 public:
  using UsageError::UsageError;
};

class CutoffInsufficient : public UsageError {
 public:
  using UsageError::UsageError;
};

class GridMismatch : public UsageError {
 public:
  using UsageError::UsageError;
};

// A hypothesis of the normal-form theory does not hold for the input.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class DivergentIntegral : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

class UnboundedGrowth : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

class SmallDivisor : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

class NonresonanceViolated : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

class ConvergenceConditionViolated : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

class NotQxLy : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

class NotLy : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

class InvalidSystem : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

// Numerical procedures that failed to deliver their contract.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class NewtonDiverged : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class StepTooLarge : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class MaxIterationsExceeded : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace snf
