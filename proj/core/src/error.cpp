#include "flawsim/error.hpp"

namespace flawsim {
namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error("invalid instance: " + join(violations)), violations_(std::move(violations)) {}

}  // namespace flawsim
