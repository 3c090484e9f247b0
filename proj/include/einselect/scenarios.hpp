#pragma once

#include <filesystem>

#include "einselect/io.hpp"

namespace einselect {
namespace scenarios {

using io::json;

struct ParamSpec {
  std::string name;
  std::string type;  // "number" | "integer" | "boolean" | "string" | "array"
  json def;
  std::string doc;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  std::vector<std::string> presets;
};

struct RunOptions {
  std::string scenario;
  std::string preset;                  // optional
  std::filesystem::path config_path;   // optional
  std::optional<uint64_t> seed;        // overrides config
  std::filesystem::path out_dir = ".";
  bool emit_plots = false;
  int jobs = 1;
};

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

const std::vector<ScenarioSpec>& registry();

/// Machine-readable schema of every scenario (parameter names, types,
/// defaults, presets).
json list_scenarios();

/// Default config for a scenario (optionally with a preset applied);
/// validates against the schema by construction.
json default_config(const std::string& scenario, const std::string& preset = "");

/// Runs one scenario end to end: strict config validation, execution,
/// output files, and a run manifest. Returns a process exit code.
int run(const RunOptions& options);

}  // namespace scenarios
}  // namespace einselect
