// Scenario runner. One scenario per invocation; the report goes to --out
// (stdout by default) as CSV or JSON.
//
// Exit codes: 0 all invariant checks pass, 1 check failure (report still
// emitted), 2 config error, 3 dimension overflow.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "redstates/space.hpp"
#include "scenario.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  bool out_set = false, format_set = false, seed_set = false, tolerance_set = false;
};

void attach_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config_path,
                  "Config file (JSON or key=value lines); '-' reads stdin");
  sub->add_option("--out", flags.out_path, "Output path; '-' writes stdout")
      ->each([&](const std::string&) { flags.out_set = true; });
  sub->add_option("--format", flags.format, "Output format: csv or json")
      ->each([&](const std::string&) { flags.format_set = true; });
  sub->add_option("--seed", flags.seed, "Seed for every random draw")
      ->each([&](const std::string&) { flags.seed_set = true; });
  sub->add_option("--tolerance", flags.tolerance, "Residual tolerance for invariant checks")
      ->each([&](const std::string&) { flags.tolerance_set = true; });
}

int write_output(const redstates::scenario::ScenarioReport& report, const std::string& out_path,
                 const std::string& format) {
  const std::string text = format == "json" ? redstates::scenario::to_json_text(report)
                                            : redstates::scenario::to_csv(report);
  if (out_path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    out << text;
  }
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redstates: density-operator scenarios for reduced states, "
               "coarse-graining, measurement chains and spin-bath decoherence"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, CommonFlags>> subcommands;
  subcommands.reserve(redstates::scenario::scenario_names().size());
  for (const std::string& name : redstates::scenario::scenario_names()) {
    CLI::App* sub = app.add_subcommand(name, "Run the '" + name + "' scenario");
    subcommands.emplace_back(sub, CommonFlags{});
  }
  for (auto& [sub, flags] : subcommands) attach_common(sub, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [sub, flags] : subcommands) {
      if (!sub->parsed()) continue;
      nlohmann::ordered_json raw = nlohmann::ordered_json::object();
      if (!flags.config_path.empty())
        raw = redstates::scenario::parse_config_file(flags.config_path);

      std::optional<std::string> out_override, format_override;
      std::optional<std::uint64_t> seed_override;
      std::optional<double> tolerance_override;
      if (flags.out_set) out_override = flags.out_path;
      if (flags.format_set) format_override = flags.format;
      if (flags.seed_set) seed_override = flags.seed;
      if (flags.tolerance_set) tolerance_override = flags.tolerance;

      const redstates::scenario::ScenarioConfig config = redstates::scenario::build_config(
          sub->get_name(), std::move(raw), out_override, format_override, seed_override,
          tolerance_override);
      const redstates::scenario::ScenarioReport report = redstates::scenario::run(config);
      return write_output(report, config.out_path, config.format);
    }
  } catch (const redstates::scenario::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const redstates::dimension_limit_error& e) {
    std::cerr << "dimension overflow: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
