#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "trustsim/core.hpp"

namespace trustsim {

/// Structural problem in a config document: wrong types, unknown fields,
/// malformed JSON. Semantic range problems are reported by validate_config
/// instead, as data.
class ConfigParseError : public std::runtime_error {
 public:
  explicit ConfigParseError(const std::string& what) : std::runtime_error(what) {}
};

ScenarioConfig config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg);

/// Reads and parses a config file. Throws ConfigParseError with the file path
/// and parse location on malformed JSON, std::runtime_error if unreadable.
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace trustsim
