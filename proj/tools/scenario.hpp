// Scenario configs and runners binding the library modules to the CLI.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "report.hpp"

namespace redstates::scenario {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string scenario;
  nlohmann::ordered_json parameters;  // scenario-specific keys only
  std::string out_path = "-";
  std::string format = "csv";  // csv | json
  std::optional<std::uint64_t> seed;
  double tolerance = 1e-10;
};

const std::vector<std::string>& scenario_names();

// Parses a config document: JSON when it starts with '{', flat key=value
// lines otherwise ('#' starts a comment; values are parsed as JSON scalars
// where possible).
nlohmann::ordered_json parse_config_text(const std::string& text);

// Reads and parses a config file; "-" reads stdin.
nlohmann::ordered_json parse_config_file(const std::string& path);

// Validates the raw document for `scenario` (unknown keys are errors, not
// warnings), extracts the reserved keys (scenario, seed, out, format,
// tolerance) and applies the command-line overrides, which win.
ScenarioConfig build_config(const std::string& scenario, nlohmann::ordered_json raw,
                            const std::optional<std::string>& out_override = {},
                            const std::optional<std::string>& format_override = {},
                            const std::optional<std::uint64_t>& seed_override = {},
                            const std::optional<double>& tolerance_override = {});

// Deterministic given (config, seed).
ScenarioReport run(const ScenarioConfig& config);

}  // namespace redstates::scenario
