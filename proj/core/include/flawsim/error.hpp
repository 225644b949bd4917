#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace flawsim {

/// Raised when an instance description breaks a model constraint.
/// Carries every violation found, not only the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A well-formed input that the requested operation cannot handle
/// (implicit instance given to the analyzer, undefined arc bound, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed break sequence or bitstring.
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flawsim
