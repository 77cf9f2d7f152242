// Structured scenario results and their CSV/JSON serializations.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace redstates::scenario {

using Cell = std::variant<double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
};

struct ScenarioReport {
  std::string scenario;
  nlohmann::ordered_json parameters;  // resolved values, fixed key order
  std::vector<Table> tables;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  Table& add_table(std::string name, std::vector<std::string> columns);
  void add_check(std::string name, bool pass, double residual);
};

// 17 significant digits, '.' decimal separator.
std::string format_double(double v);

std::string to_csv(const ScenarioReport& report);
std::string to_json_text(const ScenarioReport& report);

}  // namespace redstates::scenario
