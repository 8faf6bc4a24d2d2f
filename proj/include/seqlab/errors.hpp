#ifndef SEQLAB_ERRORS_HPP
#define SEQLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seqlab {

/// Malformed serialized input (JSON schema violation). The message names the
/// offending field. CLI maps this to exit code 3.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// A resource guard tripped (e.g. materialization horizon above the cap).
/// CLI maps this to exit code 4.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by checks that only accept convex combinations of dilations when
/// handed anything else.
class UnsupportedOperatorError : public std::runtime_error {
 public:
  explicit UnsupportedOperatorError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Unknown claim id or invalid override passed to the verification registry.
class ClaimError : public std::runtime_error {
 public:
  explicit ClaimError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace seqlab

#endif  // SEQLAB_ERRORS_HPP
