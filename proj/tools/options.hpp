#pragma once

#include "isoglot/measures.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace CLI {
class Option;
}

namespace isoglot::cli {

// Everything a run needs, merged from command-line flags, ISOGLOT_* environment
// variables and an optional key=value config file. Flags win over the
// environment, which wins over the file; built-in defaults come last.
struct RunConfig {
    std::string subcommand;

    std::vector<std::string> inputs; // embedding files (stats, distance)
    std::string pairs_path;          // pair-score CSV (correlate, regress, select)
    std::string perf_path;           // task-performance CSV

    std::size_t limit = 200000;
    bool no_normalize = false;
    bool no_center = false;

    std::string measures = "svg,cond_hm,econd_hm";
    int svg_top_k = 0; // 0 = whole spectra
    std::string combiner = "hm";
    int is_top_n = 10000;
    int is_k = 10;
    double is_mass = 0.9;
    int gh_sample = 5000;
    unsigned workers = 0; // 0 = machine parallelism
    bool no_cache = false;

    std::string task; // empty = every task
    double alpha = 0.01;
    std::string candidates; // empty = every available column
    std::string mode = "source";
    int min_group = 3;
    std::string plot;

    std::string format = "csv";
    std::string output; // empty = stdout
    std::uint64_t seed = 0; // reserved for randomized diagnostics

    std::string config_path;
    std::string write_config_path;
};

// Config-file key -> the option registered for it on the active subcommand.
// An option with a nonzero count (given on the command line or through its
// environment variable) shadows the file's value for that key.
using OptionIndex = std::map<std::string, const CLI::Option*>;

// Sets one field from its config-file key. Throws std::invalid_argument on an
// unknown key or an unparseable value.
void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value);

// Applies `key=value` lines from the file at path. Blank lines and lines
// starting with '#' are skipped. A `subcommand` line must match the active
// subcommand.
void apply_config_file(RunConfig& cfg, const std::string& path, const OptionIndex& given);

// Writes the full effective configuration, one key per line; reading the file
// back through apply_config_file reproduces cfg exactly.
void write_config_file(const RunConfig& cfg, const std::string& path);

// Range and combination checks for the active subcommand. Runs before any
// input file is opened.
void validate(const RunConfig& cfg);

// Comma-separated measure tokens; "all" expands to every measure.
std::set<Measure> parse_measures(const std::string& tokens);

// Comma-separated list, no trimming, empty string -> empty list.
std::vector<std::string> split_list(const std::string& s);

} // namespace isoglot::cli
