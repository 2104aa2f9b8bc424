#pragma once

// Experiment configuration: JSON schema, round trip and static validation.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyharm/map.hpp"
#include "polyharm/models.hpp"
#include "polyharm/reduction.hpp"
#include "polyharm/variational.hpp"

namespace polyharm::tool {

inline constexpr int kSchemaVersion = 1;

const std::vector<std::string>& command_names();

struct DomainSpec {
  std::string model = "flat_torus";
  int dim = 0;
  std::vector<double> periods;
  std::vector<std::string> metric;
  std::map<std::string, double> params;
  double radius = 1.0;

  bool operator==(const DomainSpec&) const = default;
};

struct TargetSpec {
  std::string model = "euclidean";
  int dim = 0;
  std::vector<std::string> metric;
  std::map<std::string, double> params;
  int jet_order = 16;
  double curvature = 1.0;
  double collar = 1e-3;

  bool operator==(const TargetSpec&) const = default;
};

struct RandomFieldSpec {
  int modes = 3;
  double amplitude = 0.1;

  bool operator==(const RandomFieldSpec&) const = default;
};

// A closed form in x1..xm, a grid file, or (variation fields only) a random
// trigonometric field drawn from the seed.
struct MapSpec {
  std::vector<std::string> components;
  std::map<std::string, double> params;
  std::string grid_file;
  std::optional<RandomFieldSpec> random;

  bool operator==(const MapSpec&) const = default;
};

struct GridSpec {
  std::vector<int> shape;
  int stencil_order = 4;
  std::vector<double> lo;

  bool operator==(const GridSpec&) const = default;
};

struct FlowSpec {
  double dt = 1e-3;
  int steps = 100;

  bool operator==(const FlowSpec&) const = default;
};

struct Tolerances {
  double variation = 1e-4;
  double equator = 1e-10;
  double root = 1e-8;

  bool operator==(const Tolerances&) const = default;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string command;
  DomainSpec domain;
  TargetSpec target;
  MapSpec map;
  std::optional<MapSpec> second_map;
  std::optional<MapSpec> variation;
  std::string order = "1";
  std::string eval_mode = "grid_fd";
  GridSpec grid;
  std::vector<std::array<int, 2>> window;
  std::string kind = "plain";
  double variation_t = 1e-5;
  int latitude_m = 2;
  FlowSpec flow;
  Tolerances tolerances;
  std::string output;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigError on malformed input; unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::ordered_json& j);
ExperimentConfig load_config(const std::string& path);
// Canonical form: every field, fixed key order.
nlohmann::ordered_json to_json(const ExperimentConfig& c);

DomainModel make_domain(const ExperimentConfig& c);
TargetModel make_target(const ExperimentConfig& c);
std::shared_ptr<const Grid> make_grid(const ExperimentConfig& c, const DomainModel& dom);
GridMap make_map(const ExperimentConfig& c, const MapSpec& spec, const DomainModel& dom, const TargetModel& tgt,
                 const std::shared_ptr<const Grid>& grid);
BundleSection make_variation(const ExperimentConfig& c, const GridMap& phi);
TensionOrder order_of(const ExperimentConfig& c);
Window window_of(const ExperimentConfig& c);

struct Diagnostic {
  std::string kind;  // config, capability, resolution, window
  std::string message;
};

// Static checks, no computation.  Empty means runnable.
std::vector<Diagnostic> validate(const ExperimentConfig& c);

}  // namespace polyharm::tool
