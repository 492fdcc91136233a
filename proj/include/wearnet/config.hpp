#pragma once

// JSON run configuration: a "scenario" section (SI units, suffixed keys) and
// an "experiment" section. Missing keys take the defaults of the chosen
// experiment id; unknown keys are errors.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wearnet/harness.hpp"
#include "wearnet/scenario.hpp"

namespace wearnet {

inline constexpr const char* kToolName = "wearnet";
inline constexpr const char* kToolVersion = "1.0.0";

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& constraint)
      : std::runtime_error(field + ": " + constraint), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  ScenarioConfig scenario;
  ExperimentSpec experiment;
};

/// Defaults for an experiment id, grids filled.
RunConfig default_run_config(ExperimentId id = ExperimentId::kCustom);

/// Accepts a plain config or a run manifest (its "config" member).
/// `default_id` applies when the document names no experiment id.
RunConfig parse_config(const nlohmann::json& doc, ExperimentId default_id = ExperimentId::kCustom);
RunConfig load_config(const std::filesystem::path& path, ExperimentId default_id = ExperimentId::kCustom);

nlohmann::json to_json(const ScenarioConfig& cfg);
nlohmann::json to_json(const ExperimentSpec& spec);
/// Fully resolved config; the worker count is operational and excluded.
nlohmann::json to_json(const RunConfig& run);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& run);

nlohmann::json manifest_json(const RunConfig& run, const std::string& timestamp);
/// Writes `manifest.json` into `dir`; throws std::runtime_error if unwritable.
std::filesystem::path emit_manifest(const std::filesystem::path& dir, const RunConfig& run);

/// Flag value if given, else SIM_WORKERS, else 1.
unsigned resolve_workers(std::optional<unsigned> flag);

}  // namespace wearnet
