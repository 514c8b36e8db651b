#pragma once

#include <stdexcept>
#include <string>

namespace hzeta {

// Input lies outside the mathematical domain of an operation (e.g. valuation of 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed surface configuration: non-coprime or proportional forms.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition does not hold (bad prime, s outside the domain, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that needs externally supplied data did not get it.
class IncompleteInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature budget exhausted, ill-conditioned fit, and similar.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The residue-tree oracle would exceed its work guard.
class TruncationTooDeep : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hzeta
