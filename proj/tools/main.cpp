#include "commands.hpp"
#include "options.hpp"

#include "isoglot/common.hpp"
#include "isoglot/version.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <exception>
#include <map>
#include <stdexcept>
#include <string>

namespace {

using isoglot::cli::OptionIndex;
using isoglot::cli::RunConfig;

std::string env_name(const std::string& key) {
    std::string out = "ISOGLOT_";
    for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

// Registers an option under its config-file key: the matching ISOGLOT_*
// environment variable feeds it, and the index entry lets the config loader
// see whether it was given explicitly. Positionals skip the env part.
CLI::Option* keyed(OptionIndex& index, const std::string& key, CLI::Option* opt, bool env = true) {
    if (env) opt->envname(env_name(key));
    index[key] = opt;
    return opt;
}

void add_output_options(CLI::App& sub, RunConfig& cfg, OptionIndex& index) {
    keyed(index, "format", sub.add_option("--format", cfg.format, "Output format, csv or json"));
    keyed(index, "output", sub.add_option("-o,--output", cfg.output, "Write results here instead of stdout"));
    keyed(index, "seed", sub.add_option("--seed", cfg.seed, "Reserved for randomized diagnostics"));
    sub.add_option("--config", cfg.config_path, "Read option defaults from this key=value file")
        ->envname("ISOGLOT_CONFIG");
    sub.add_option("--write-config", cfg.write_config_path,
                   "Write the effective configuration to this file before running");
}

void add_embedding_options(CLI::App& sub, RunConfig& cfg, OptionIndex& index) {
    keyed(index, "inputs",
          sub.add_option("inputs", cfg.inputs, "Embedding files (word2vec text, optionally gzipped)"), false);
    keyed(index, "limit", sub.add_option("--limit", cfg.limit, "Keep at most this many rows per file"));
    keyed(index, "no-normalize",
          sub.add_flag("--no-normalize", cfg.no_normalize, "Skip row length normalization"));
    keyed(index, "no-center", sub.add_flag("--no-center", cfg.no_center, "Skip column mean centering"));
}

void add_table_options(CLI::App& sub, RunConfig& cfg, OptionIndex& index) {
    keyed(index, "pairs", sub.add_option("pairs", cfg.pairs_path, "Pair-score CSV, as written by distance"),
          false);
    keyed(index, "perf", sub.add_option("perf", cfg.perf_path, "Task-performance CSV"), false);
    keyed(index, "task", sub.add_option("--task", cfg.task, "Use only rows of this task"));
}

} // namespace

int main(int argc, char** argv) {
    using namespace isoglot;
    using namespace isoglot::cli;

    CLI::App app{"Compares word embedding spaces through their singular spectra"};
    app.name("isoglot");
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    std::map<std::string, OptionIndex> keys;

    CLI::App* stats = app.add_subcommand("stats", "Spectral statistics of each embedding space");
    add_embedding_options(*stats, cfg, keys["stats"]);
    add_output_options(*stats, cfg, keys["stats"]);

    CLI::App* distance = app.add_subcommand("distance", "Pairwise distances between embedding spaces");
    add_embedding_options(*distance, cfg, keys["distance"]);
    {
        OptionIndex& index = keys["distance"];
        keyed(index, "measures",
              distance->add_option("--measures", cfg.measures,
                                   "Comma-separated: svg, cond_hm, econd_hm, is, gh, or all"));
        keyed(index, "svg-top-k",
              distance->add_option("--svg-top-k", cfg.svg_top_k,
                                   "Compare only the k largest singular values (0 = whole spectrum)"));
        keyed(index, "combiner",
              distance->add_option("--combiner", cfg.combiner,
                                   "Fold of the two per-space condition numbers: hm, min or max"));
        keyed(index, "is-top-n",
              distance->add_option("--is-top-n", cfg.is_top_n, "Rows kept for the nearest-neighbor graphs"));
        keyed(index, "is-k", distance->add_option("--is-k", cfg.is_k, "Neighbors per node in those graphs"));
        keyed(index, "is-mass",
              distance->add_option("--is-mass", cfg.is_mass,
                                   "Eigenvalue mass quantile for the comparison cutoff"));
        keyed(index, "gh-sample",
              distance->add_option("--gh-sample", cfg.gh_sample, "Rows kept for the metric-space comparison"));
        keyed(index, "workers",
              distance->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)"));
        keyed(index, "no-cache",
              distance->add_flag("--no-cache", cfg.no_cache, "Neither read nor write spectrum sidecar files"));
    }
    add_output_options(*distance, cfg, keys["distance"]);

    CLI::App* correlate = app.add_subcommand("correlate", "Correlate pair distances with task scores");
    add_table_options(*correlate, cfg, keys["correlate"]);
    keyed(keys["correlate"], "plot",
          correlate->add_option("--plot", cfg.plot,
                                "Write a scatter plot of the first measure to this SVG file"));
    add_output_options(*correlate, cfg, keys["correlate"]);

    CLI::App* regress = app.add_subcommand("regress", "Stepwise regression of task scores on distance columns");
    add_table_options(*regress, cfg, keys["regress"]);
    keyed(keys["regress"], "candidates",
          regress->add_option("--candidates", cfg.candidates,
                              "Comma-separated candidate columns (default: every available one)"));
    keyed(keys["regress"], "alpha", regress->add_option("--alpha", cfg.alpha, "Admission p-value threshold"));
    add_output_options(*regress, cfg, keys["regress"]);

    CLI::App* select = app.add_subcommand("select", "Rank transfer partners per fixed language");
    add_table_options(*select, cfg, keys["select"]);
    keyed(keys["select"], "mode",
          select->add_option("--mode", cfg.mode, "source (rank sources per target) or target (the reverse)"));
    keyed(keys["select"], "min-group",
          select->add_option("--min-group", cfg.min_group, "Minimum usable rows per group"));
    add_output_options(*select, cfg, keys["select"]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // help or version text
        diag("error", e.what());
        return 2;
    }

    CLI::App* active = app.get_subcommands().front();
    cfg.subcommand = active->get_name();

    try {
        if (!cfg.config_path.empty()) apply_config_file(cfg, cfg.config_path, keys.at(cfg.subcommand));
        validate(cfg);
        if (!cfg.write_config_path.empty()) write_config_file(cfg, cfg.write_config_path);
        if (cfg.subcommand == "stats") return cmd_stats(cfg);
        if (cfg.subcommand == "distance") return cmd_distance(cfg);
        if (cfg.subcommand == "correlate") return cmd_correlate(cfg);
        if (cfg.subcommand == "regress") return cmd_regress(cfg);
        return cmd_select(cfg);
    } catch (const io_error& e) {
        diag("error", e.what());
        return 2;
    } catch (const compute_error& e) {
        diag("error", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        diag("error", e.what());
        return 2;
    } catch (const std::exception& e) {
        diag("error", std::string("internal: ") + e.what());
        return 3;
    }
}
