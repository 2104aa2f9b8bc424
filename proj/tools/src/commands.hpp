#pragma once

#include "artifact.hpp"
#include "config.hpp"

namespace polyharm::tool {

// Validates, dispatches on c.command and returns the artifact.  Errors
// propagate as polyharm::Error.
Artifact run(const ExperimentConfig& c, int workers = 0);

// Diagnostics as an artifact (one record per diagnostic).
Artifact validation_artifact(const ExperimentConfig& c);

}  // namespace polyharm::tool
