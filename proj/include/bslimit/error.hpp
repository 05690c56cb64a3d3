#pragma once

#include <stdexcept>
#include <string>

namespace bslimit {

// Malformed edge-list input.
struct GraphFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A vertex exceeds the declared degree bound d.
struct DegreeBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller-side precondition failed (depth too small, mismatched radii, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An internal consistency check failed. These indicate a bug, never a data
// condition, and are surfaced loudly.
struct VerificationFailure : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace bslimit
