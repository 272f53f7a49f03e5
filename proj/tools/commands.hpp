#pragma once

#include "options.hpp"

#include <json.hpp>

#include <string>

namespace isoglot::cli {

// One machine-readable diagnostic line on stderr: {"level":...,"message":...}.
// Data never goes to stderr and diagnostics never go to stdout.
void diag(const std::string& level, const std::string& message);
void diag_obj(nlohmann::ordered_json obj);

// Subcommand bodies. Each returns the process exit code for the success and
// partial-failure paths; errors are thrown and mapped to codes in main.
int cmd_stats(const RunConfig& cfg);
int cmd_distance(const RunConfig& cfg);
int cmd_correlate(const RunConfig& cfg);
int cmd_regress(const RunConfig& cfg);
int cmd_select(const RunConfig& cfg);

} // namespace isoglot::cli
