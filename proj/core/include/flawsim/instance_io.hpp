#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "flawsim/instances.hpp"
#include "flawsim/model.hpp"

namespace flawsim {

/// Canonical instance document (rows sorted by source, supports by target).
nlohmann::json instance_to_json(const Instance& instance);
/// Implicit instances are written as their generator description.
nlohmann::json instance_to_json(const GeneratedModel& model);

/// Parses the rows and metadata without validating model constraints.
RawInstance raw_from_json(const nlohmann::json& doc);

/// Explicit documents are validated; generator documents are rebuilt.
GeneratedModel model_from_json(const nlohmann::json& doc, std::uint64_t cap = kDefaultExplicitCap);

GeneratedModel load_model(const std::string& path, std::uint64_t cap = kDefaultExplicitCap);

/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string instance_digest(const nlohmann::json& canonical);

}  // namespace flawsim
