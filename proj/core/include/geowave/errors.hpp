#pragma once

#include <stdexcept>
#include <string>

namespace geowave {

// Base class for all library errors. Subclasses map onto the CLI exit-code
// contract: InvalidArgument -> usage (1), IoError -> I/O (3), everything
// else -> numerical/degenerate (2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Isolated point at the chosen bandwidth: a kernel row summed to zero.
class DegenerateGraph : public Error {
 public:
  using Error::Error;
};

// Symmetry broken beyond tolerance upstream (kernel matrix not symmetric).
class NumericalConsistency : public Error {
 public:
  using Error::Error;
};

class EigensolverError : public Error {
 public:
  using Error::Error;
};

// A scalar function evaluated to a non-finite value at some eigenvalue.
class FunctionDomain : public Error {
 public:
  using Error::Error;
};

// An eigenvalue lies outside [-1, 1+shift] beyond the clamping margin.
class SpectrumViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

// Propagated state has zero discrete norm.
class DegenerateState : public Error {
 public:
  using Error::Error;
};

// Extension point sees zero kernel mass against the samples.
class DegenerateExtension : public Error {
 public:
  using Error::Error;
};

// Cutoff weights annihilated the whole density.
class EmptySupport : public Error {
 public:
  using Error::Error;
};

}  // namespace geowave
