#pragma once

#include "wpr/sim.hpp"

#include <json.hpp>

#include <string>

namespace wpr {

/// Thrown for filesystem-level problems (missing file, unwritable output),
/// as opposed to malformed content, which raises ConfigError.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Build a scenario from a JSON object. Absent keys keep their defaults;
/// unknown keys and out-of-range values raise ConfigError naming the key.
/// A run manifest ({"config": {...}, ...}) is accepted directly, so a
/// previous run's manifest can reproduce it.
ScenarioConfig config_from_json(const nlohmann::json& j);

/// Fully-resolved scenario as JSON (round-trips through config_from_json).
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Load and validate a scenario file. Missing/unreadable file -> IoError;
/// malformed JSON or bad values -> ConfigError.
ScenarioConfig load_config(const std::string& path);

/// Description of one CLI run, written next to its outputs so the run can
/// be reproduced from the manifest alone.
struct RunManifest {
  std::string command;
  ScenarioConfig config;
  int threads = 1;
  std::string out_dir;
};

void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace wpr
