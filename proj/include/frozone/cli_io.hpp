#pragma once

// Scenario config files, run outputs (CSV trajectories, JSON reports, SVG
// plots) and the command-line entry point.

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "frozone/simulator.hpp"

namespace frozone {

/// Bad config content or flag value. Maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output. Maps to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;
inline constexpr double kSvgPxPerMeter = 40.0;

/// Builds a validated config from a JSON object. "scenario" names a builtin to
/// start from, or a custom scenario (then "robot" is required). Every other
/// key overrides; unknown keys are rejected with their dotted path.
ScenarioConfig parse_config(const nlohmann::ordered_json& doc);

/// parse_config on a file. Throws IoError when unreadable, ConfigError when
/// the text is not JSON or the content is invalid.
ScenarioConfig parse_scenario_file(const std::filesystem::path& path);

/// Builtin name, or path to a JSON config file.
ScenarioConfig load_scenario(const std::string& name_or_path);

/// Complete config document; parse_config(serialize_config(c)) reproduces c.
nlohmann::ordered_json serialize_config(const ScenarioConfig& cfg);

std::string trajectory_csv(const RunReport& report);
nlohmann::ordered_json report_json(const ScenarioConfig& cfg, const BatchResult& batch);
std::string render_svg(const ScenarioConfig& cfg, const RunReport& report);

/// Writers. Throw IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_trajectory(const RunReport& report, const std::filesystem::path& path);
void write_report(const ScenarioConfig& cfg, const BatchResult& batch, const std::filesystem::path& path);
void write_svg(const ScenarioConfig& cfg, const RunReport& report, const std::filesystem::path& path);

/// `run`, `list-scenarios` and `compare`. Returns the process exit code:
/// 0 ok, 1 validation error, 2 I/O error.
int cli_main(int argc, const char* const* argv);

}  // namespace frozone
