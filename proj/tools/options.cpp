#include "options.hpp"

#include "isoglot/analysis.hpp"
#include "isoglot/common.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace isoglot::cli {

namespace {

std::size_t parse_size(const std::string& key, const std::string& value) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw std::invalid_argument(key + ": expected a nonnegative integer, got \"" + value + "\"");
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw std::invalid_argument(key + ": expected an integer, got \"" + value + "\"");
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t idx = 0;
        double out = std::stod(value, &idx);
        if (idx == value.size()) return out;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(key + ": expected a number, got \"" + value + "\"");
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument(key + ": expected true or false, got \"" + value + "\"");
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

} // namespace

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = s.find(',', start);
        out.push_back(s.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::set<Measure> parse_measures(const std::string& tokens) {
    std::set<Measure> out;
    auto parts = split_list(tokens);
    if (parts.size() == 1 && parts[0] == "all")
        return {Measure::SVG, Measure::COND_HM, Measure::ECOND_HM, Measure::GH, Measure::IS};
    for (const std::string& p : parts) out.insert(measure_from_name(p));
    return out;
}

void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "inputs") {
        cfg.inputs = split_list(value);
        for (const std::string& p : cfg.inputs)
            if (p.empty()) throw std::invalid_argument("inputs: empty path in \"" + value + "\"");
    } else if (key == "pairs") {
        cfg.pairs_path = value;
    } else if (key == "perf") {
        cfg.perf_path = value;
    } else if (key == "limit") {
        cfg.limit = parse_size(key, value);
    } else if (key == "no-normalize") {
        cfg.no_normalize = parse_bool(key, value);
    } else if (key == "no-center") {
        cfg.no_center = parse_bool(key, value);
    } else if (key == "measures") {
        cfg.measures = value;
    } else if (key == "svg-top-k") {
        cfg.svg_top_k = parse_int(key, value);
    } else if (key == "combiner") {
        cfg.combiner = value;
    } else if (key == "is-top-n") {
        cfg.is_top_n = parse_int(key, value);
    } else if (key == "is-k") {
        cfg.is_k = parse_int(key, value);
    } else if (key == "is-mass") {
        cfg.is_mass = parse_double(key, value);
    } else if (key == "gh-sample") {
        cfg.gh_sample = parse_int(key, value);
    } else if (key == "workers") {
        cfg.workers = static_cast<unsigned>(parse_size(key, value));
    } else if (key == "no-cache") {
        cfg.no_cache = parse_bool(key, value);
    } else if (key == "task") {
        cfg.task = value;
    } else if (key == "alpha") {
        cfg.alpha = parse_double(key, value);
    } else if (key == "candidates") {
        cfg.candidates = value;
    } else if (key == "mode") {
        cfg.mode = value;
    } else if (key == "min-group") {
        cfg.min_group = parse_int(key, value);
    } else if (key == "plot") {
        cfg.plot = value;
    } else if (key == "format") {
        cfg.format = value;
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "seed") {
        cfg.seed = parse_size(key, value);
    } else {
        throw std::invalid_argument("unknown config key \"" + key + "\"");
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path, const OptionIndex& given) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path + ": cannot open config file");

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value, got \"" +
                                        line + "\"");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (key == "subcommand") {
            if (value != cfg.subcommand)
                throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": config file is for \"" +
                                            value + "\", but the active subcommand is \"" + cfg.subcommand +
                                            "\"");
            continue;
        }
        // A value supplied on the command line or through the environment
        // shadows the file.
        auto it = given.find(key);
        if (it != given.end() && it->second->count() > 0) continue;
        try {
            apply_config_kv(cfg, key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void write_config_file(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error(path + ": cannot write config file");
    out << "# isoglot configuration\n";
    out << "subcommand=" << cfg.subcommand << '\n';
    out << "inputs=" << join_list(cfg.inputs) << '\n';
    out << "pairs=" << cfg.pairs_path << '\n';
    out << "perf=" << cfg.perf_path << '\n';
    out << "limit=" << cfg.limit << '\n';
    out << "no-normalize=" << (cfg.no_normalize ? "true" : "false") << '\n';
    out << "no-center=" << (cfg.no_center ? "true" : "false") << '\n';
    out << "measures=" << cfg.measures << '\n';
    out << "svg-top-k=" << cfg.svg_top_k << '\n';
    out << "combiner=" << cfg.combiner << '\n';
    out << "is-top-n=" << cfg.is_top_n << '\n';
    out << "is-k=" << cfg.is_k << '\n';
    out << "is-mass=" << format_g17(cfg.is_mass) << '\n';
    out << "gh-sample=" << cfg.gh_sample << '\n';
    out << "workers=" << cfg.workers << '\n';
    out << "no-cache=" << (cfg.no_cache ? "true" : "false") << '\n';
    out << "task=" << cfg.task << '\n';
    out << "alpha=" << format_g17(cfg.alpha) << '\n';
    out << "candidates=" << cfg.candidates << '\n';
    out << "mode=" << cfg.mode << '\n';
    out << "min-group=" << cfg.min_group << '\n';
    out << "plot=" << cfg.plot << '\n';
    out << "format=" << cfg.format << '\n';
    out << "output=" << cfg.output << '\n';
    out << "seed=" << cfg.seed << '\n';
    if (!out) throw io_error(path + ": cannot write config file");
}

void validate(const RunConfig& cfg) {
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("format must be csv or json, got \"" + cfg.format + "\"");

    const bool loads_spaces = cfg.subcommand == "stats" || cfg.subcommand == "distance";
    if (loads_spaces && cfg.limit == 0) throw std::invalid_argument("limit must be positive");

    if (cfg.subcommand == "stats") {
        if (cfg.inputs.empty()) throw std::invalid_argument("stats needs at least 1 embedding file");
        return;
    }

    if (cfg.subcommand == "distance") {
        if (cfg.inputs.size() < 2) throw std::invalid_argument("distance needs at least 2 embedding files");
        auto ms = parse_measures(cfg.measures);
        if (ms.empty()) throw std::invalid_argument("distance needs at least 1 measure");
        if (cfg.no_normalize && (ms.count(Measure::IS) || ms.count(Measure::GH)))
            throw std::invalid_argument(
                "no-normalize cannot be combined with measures is or gh, which need unit-length rows");
        if (cfg.svg_top_k < 0) throw std::invalid_argument("svg-top-k must be nonnegative (0 = whole spectra)");
        combiner_from_name(cfg.combiner);
        if (cfg.is_top_n < 2) throw std::invalid_argument("is-top-n must be at least 2");
        if (cfg.is_k < 1 || cfg.is_k >= cfg.is_top_n)
            throw std::invalid_argument("is-k must be in [1, is-top-n - 1]");
        if (!(cfg.is_mass > 0.0 && cfg.is_mass <= 1.0))
            throw std::invalid_argument("is-mass must be in (0, 1], got " + format_g17(cfg.is_mass));
        if (cfg.gh_sample < 2) throw std::invalid_argument("gh-sample must be at least 2");
        return;
    }

    // The three analysis subcommands all join the same two tables.
    if (cfg.pairs_path.empty()) throw std::invalid_argument(cfg.subcommand + " needs a pair-score CSV");
    if (cfg.perf_path.empty()) throw std::invalid_argument(cfg.subcommand + " needs a performance CSV");

    if (cfg.subcommand == "regress") {
        if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
            throw std::invalid_argument("alpha must be in (0, 1], got " + format_g17(cfg.alpha));
        for (const std::string& tok : split_list(cfg.candidates)) {
            if (tok == "phy" || tok == "typ" || tok == "geo") continue;
            measure_from_name(tok); // throws on anything else
        }
    } else if (cfg.subcommand == "select") {
        selection_mode_from_name(cfg.mode);
        if (cfg.min_group < 3) throw std::invalid_argument("min-group must be at least 3");
    }
}

} // namespace isoglot::cli
