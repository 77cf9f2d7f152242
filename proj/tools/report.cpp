#include "report.hpp"

#include <cstdio>

namespace redstates::scenario {

bool ScenarioReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

Table& ScenarioReport::add_table(std::string name, std::vector<std::string> columns) {
  tables.push_back(Table{std::move(name), std::move(columns), {}});
  return tables.back();
}

void ScenarioReport::add_check(std::string name, bool pass, double residual) {
  checks.push_back(CheckResult{std::move(name), pass, residual});
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

void append_table(std::string& out, const Table& table) {
  out += "# table: " + table.name + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const std::vector<Cell>& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
}

}  // namespace

std::string to_csv(const ScenarioReport& report) {
  std::string out;
  out += "# scenario: " + report.scenario + "\n";
  out += "# parameters: " + report.parameters.dump() + "\n";
  for (const Table& t : report.tables) {
    out += '\n';
    append_table(out, t);
  }
  out += '\n';
  Table checks{"checks", {"name", "status", "residual"}, {}};
  for (const CheckResult& c : report.checks)
    checks.rows.push_back({Cell{c.name}, Cell{std::string(c.pass ? "pass" : "fail")},
                           Cell{c.residual}});
  append_table(out, checks);
  return out;
}

std::string to_json_text(const ScenarioReport& report) {
  nlohmann::ordered_json j;
  j["scenario"] = report.scenario;
  j["parameters"] = report.parameters;
  nlohmann::ordered_json tables = nlohmann::ordered_json::array();
  for (const Table& t : report.tables) {
    nlohmann::ordered_json jt;
    jt["name"] = t.name;
    jt["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const std::vector<Cell>& row : t.rows) {
      nlohmann::ordered_json jr = nlohmann::ordered_json::array();
      for (const Cell& cell : row) {
        if (const double* d = std::get_if<double>(&cell))
          jr.push_back(*d);
        else
          jr.push_back(std::get<std::string>(cell));
      }
      rows.push_back(std::move(jr));
    }
    jt["rows"] = std::move(rows);
    tables.push_back(std::move(jt));
  }
  j["tables"] = std::move(tables);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["residual"] = c.residual;
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

}  // namespace redstates::scenario
