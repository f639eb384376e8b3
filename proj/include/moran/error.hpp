#pragma once

#include <stdexcept>

namespace moran {

/// Invalid model parameters (population too small for the variant, bad parent count).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was applied out of order (event time does not match the current step).
class SequencingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Parameters outside the regime an exact computation supports (e.g. N <= k).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The transition structure is not irreducible, so no unique stationary law exists.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested method cannot handle a problem of this size.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace moran
