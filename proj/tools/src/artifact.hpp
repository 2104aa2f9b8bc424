#pragma once

// Result artifacts: '#' header lines (version, command, config echo,
// summary) followed by whitespace-separated columnar records.

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "polyharm/errors.hpp"

namespace polyharm::tool {

using Cell = std::variant<double, long long, std::string>;

struct Artifact {
  std::string command;
  nlohmann::ordered_json config;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void put(const std::string& key, Cell v) { summary.emplace_back(key, std::move(v)); }
  const Cell* find(const std::string& key) const;
  double number(const std::string& key) const;
};

// Doubles are written with %.17g so values round-trip exactly.
std::string format_cell(const Cell& c);
void write_artifact(std::ostream& os, const Artifact& a);
std::string artifact_text(const Artifact& a);

// Process exit status for each error kind; 0 is success, 2 command-line usage.
inline constexpr int kExitUsage = 2;
int exit_code(ErrorKind k);

// One-line JSON error record for stderr.
std::string error_record(const std::string& kind, int code, const std::string& message);

}  // namespace polyharm::tool
