#include "artifact.hpp"

#include <cstdio>
#include <sstream>

#include "polyharm/version.hpp"

namespace polyharm::tool {

const Cell* Artifact::find(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return &v;
  return nullptr;
}

double Artifact::number(const std::string& key) const {
  const Cell* c = find(key);
  if (!c) throw ContractError("artifact has no summary entry '" + key + "'");
  if (auto d = std::get_if<double>(c)) return *d;
  if (auto i = std::get_if<long long>(c)) return static_cast<double>(*i);
  throw ContractError("summary entry '" + key + "' is not numeric");
}

std::string format_cell(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", *d);
    return b;
  }
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

void write_artifact(std::ostream& os, const Artifact& a) {
  os << "# polyharm " << kVersion << "\n";
  os << "# command: " << a.command << "\n";
  os << "# config: " << a.config.dump() << "\n";
  for (const auto& [k, v] : a.summary) os << "# summary." << k << ": " << format_cell(v) << "\n";
  os << "# columns:";
  for (const auto& c : a.columns) os << " " << c;
  os << "\n";
  for (const auto& r : a.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << format_cell(r[i]);
    os << "\n";
  }
}

std::string artifact_text(const Artifact& a) {
  std::ostringstream os;
  write_artifact(os, a);
  return os.str();
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return 3;
    case ErrorKind::capability: return 4;
    case ErrorKind::chart: return 5;
    case ErrorKind::contract: return 6;
    case ErrorKind::degenerate: return 7;
    case ErrorKind::precondition: return 8;
  }
  return 1;
}

std::string error_record(const std::string& kind, int code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", kind}, {"exit_code", code}, {"message", message}};
  return j.dump();
}

}  // namespace polyharm::tool
