#include "commands.hpp"

#include "isoglot/analysis.hpp"
#include "isoglot/common.hpp"
#include "isoglot/embedding.hpp"
#include "isoglot/measures.hpp"
#include "isoglot/scatter.hpp"
#include "isoglot/spectrum.hpp"

#include "csv_util.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <streambuf>

namespace isoglot::cli {

void diag(const std::string& level, const std::string& message) {
    nlohmann::ordered_json j;
    j["level"] = level;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
}

void diag_obj(nlohmann::ordered_json obj) {
    std::cerr << obj.dump() << '\n';
}

namespace {

// Redirects clog for its lifetime and re-emits every captured line as a JSON
// warning, so library warnings stay on the diagnostic stream in the same
// machine-readable shape as the tool's own messages. Character-level
// interleaving between pool threads can garble a line's text, but the wrapper
// object stays well formed.
class ClogCapture {
public:
    ClogCapture() : old_(std::clog.rdbuf(&buf_)) {}

    ~ClogCapture() {
        std::clog.rdbuf(old_);
        for (const std::string& line : buf_.take_lines()) diag("warning", line);
    }

    ClogCapture(const ClogCapture&) = delete;
    ClogCapture& operator=(const ClogCapture&) = delete;

private:
    class LineBuf : public std::streambuf {
    public:
        std::vector<std::string> take_lines() {
            std::lock_guard<std::mutex> guard(mu_);
            if (!cur_.empty()) {
                lines_.push_back(cur_);
                cur_.clear();
            }
            return std::move(lines_);
        }

    protected:
        int_type overflow(int_type ch) override {
            if (traits_type::eq_int_type(ch, traits_type::eof())) return traits_type::not_eof(ch);
            std::lock_guard<std::mutex> guard(mu_);
            if (traits_type::to_char_type(ch) == '\n') {
                lines_.push_back(cur_);
                cur_.clear();
            } else {
                cur_.push_back(traits_type::to_char_type(ch));
            }
            return ch;
        }

    private:
        std::mutex mu_;
        std::string cur_;
        std::vector<std::string> lines_;
    };

    LineBuf buf_;
    std::streambuf* old_;
};

void emit_payload(const RunConfig& cfg, const std::string& payload) {
    if (cfg.output.empty()) {
        std::cout << payload << std::flush;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw io_error(cfg.output + ": cannot open output file");
    out << payload;
    out.close();
    if (!out) throw io_error(cfg.output + ": write failed");
}

std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string fmt_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// "1,3,6-8": ascending indices with runs of three or more collapsed.
std::string collapse_indices(std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    std::string out;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && idx[j + 1] == idx[j] + 1) ++j;
        if (!out.empty()) out += ',';
        if (j >= i + 2) {
            out += std::to_string(idx[i]) + "-" + std::to_string(idx[j]);
        } else {
            out += std::to_string(idx[i]);
            if (j == i + 1) out += ',' + std::to_string(idx[j]);
        }
        i = j + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// stats

int run_stats(const RunConfig& cfg) {
    struct SpaceRow {
        std::string lang;
        Eigen::Index n = 0, d = 0;
        SpectrumStats st;
        std::vector<double> top;
    };
    std::vector<SpaceRow> table;

    for (const std::string& path : cfg.inputs) {
        EmbeddingSpace space = preprocess(load_embeddings(path, cfg.limit), !cfg.no_normalize, !cfg.no_center);
        SpaceRow row;
        row.lang = space.lang_id;
        row.n = space.n();
        row.d = space.d();
        Spectrum spec;
        {
            ClogCapture capture;
            spec = singular_values(space);
        }
        space.matrix.resize(0, 0); // one space resident at a time
        row.st = spectrum_stats(spec);
        const Eigen::Index top = std::min<Eigen::Index>(10, spec.d());
        for (Eigen::Index i = 0; i < top; ++i) row.top.push_back(spec.sigma(i));
        table.push_back(std::move(row));
    }

    std::string payload;
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "lang,n,d,entropy,erank,kappa,kappa_ecn";
        for (int i = 1; i <= 10; ++i) os << ",sigma_" << i;
        os << '\n';
        for (const SpaceRow& row : table) {
            os << csvu::quote_field(row.lang) << ',' << row.n << ',' << row.d << ','
               << format_g17(row.st.entropy) << ',' << row.st.erank << ',' << format_g17(row.st.kappa) << ','
               << format_g17(row.st.kappa_ecn);
            for (int i = 0; i < 10; ++i) {
                os << ',';
                if (i < static_cast<int>(row.top.size())) os << format_g17(row.top[static_cast<std::size_t>(i)]);
            }
            os << '\n';
        }
        payload = os.str();
    } else {
        nlohmann::ordered_json spaces = nlohmann::ordered_json::array();
        for (const SpaceRow& row : table) {
            nlohmann::ordered_json j;
            j["lang"] = row.lang;
            j["n"] = row.n;
            j["d"] = row.d;
            j["entropy"] = row.st.entropy;
            j["erank"] = row.st.erank;
            j["kappa"] = row.st.kappa;
            j["kappa_ecn"] = row.st.kappa_ecn;
            j["top_sigma"] = row.top;
            spaces.push_back(std::move(j));
        }
        payload = dump_json({{"spaces", std::move(spaces)}});
    }
    emit_payload(cfg, payload);
    return 0;
}

// ---------------------------------------------------------------------------
// distance

constexpr int kCacheVersion = 1;

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path + ": cannot open file");
    std::vector<char> buf(1 << 20);
    std::uint64_t h = 14695981039346656037ull;
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        std::streamsize got = in.gcount();
        if (got > 0) h = fnv1a64(buf.data(), static_cast<std::size_t>(got), h);
    }
    if (in.bad()) throw io_error(path + ": read error");
    return h;
}

struct CacheKey {
    std::string content_hash;
    std::size_t limit = 0;
    bool normalized = true;
    bool centered = true;
};

std::optional<Spectrum> cache_load(const std::string& sidecar, const CacheKey& key) {
    std::ifstream in(sidecar, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.at("cache_version").get<int>() != kCacheVersion) return std::nullopt;
        if (j.at("content_hash").get<std::string>() != key.content_hash ||
            j.at("limit").get<std::size_t>() != key.limit || j.at("normalized").get<bool>() != key.normalized ||
            j.at("centered").get<bool>() != key.centered)
            return std::nullopt; // stale entry, will be rewritten
        return spectrum_from_json(j.at("spectrum"));
    } catch (const std::exception& e) {
        diag("warning", sidecar + ": ignoring unusable spectra cache (" + std::string(e.what()) + ")");
        return std::nullopt;
    }
}

void cache_store(const std::string& sidecar, const CacheKey& key, const Spectrum& spec) {
    nlohmann::ordered_json j;
    j["cache_version"] = kCacheVersion;
    j["content_hash"] = key.content_hash;
    j["limit"] = key.limit;
    j["normalized"] = key.normalized;
    j["centered"] = key.centered;
    j["spectrum"] = spectrum_to_json(spec);

    // Written to the side and renamed so a concurrent reader never sees a
    // half-written file. Failure to persist is not fatal.
    const std::string tmp = sidecar + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            diag("warning", sidecar + ": could not persist spectra cache");
            return;
        }
        out << j.dump();
        out.close();
        if (!out) {
            diag("warning", sidecar + ": could not persist spectra cache");
            std::remove(tmp.c_str());
            return;
        }
    }
    if (std::rename(tmp.c_str(), sidecar.c_str()) != 0) {
        diag("warning", sidecar + ": could not persist spectra cache");
        std::remove(tmp.c_str());
    }
}

int run_distance(const RunConfig& cfg) {
    const std::set<Measure> measures = parse_measures(cfg.measures);
    const bool want_spectra = measures.count(Measure::SVG) || measures.count(Measure::COND_HM) ||
                              measures.count(Measure::ECOND_HM);
    const bool want_is = measures.count(Measure::IS) > 0;
    const bool want_gh = measures.count(Measure::GH) > 0;
    const bool want_matrix = want_is || want_gh;

    // The graph measures only look at the top rows, so when the spectral route
    // is satisfied from cache (or absent) the load can stop early.
    std::size_t matrix_rows = 2;
    if (want_is) matrix_rows = std::max<std::size_t>(matrix_rows, static_cast<std::size_t>(cfg.is_top_n));
    if (want_gh) matrix_rows = std::max<std::size_t>(matrix_rows, static_cast<std::size_t>(cfg.gh_sample));

    std::vector<EmbeddingSpace> spaces;
    std::vector<std::optional<Spectrum>> spectra(cfg.inputs.size());

    for (std::size_t i = 0; i < cfg.inputs.size(); ++i) {
        const std::string& path = cfg.inputs[i];
        const std::string sidecar = path + ".spectrum.json";
        CacheKey key;
        if (want_spectra && !cfg.no_cache) {
            key = CacheKey{hash_hex(hash_file(path)), cfg.limit, !cfg.no_normalize, !cfg.no_center};
            spectra[i] = cache_load(sidecar, key);
        }

        EmbeddingSpace shell;
        shell.lang_id = lang_from_path(path);

        const bool compute_spectrum = want_spectra && !spectra[i];
        if (want_matrix || compute_spectrum) {
            const std::size_t lim = compute_spectrum ? cfg.limit : std::min(cfg.limit, matrix_rows);
            EmbeddingSpace loaded = load_embeddings(path, lim);
            if (!cfg.no_normalize) loaded = length_normalize(std::move(loaded));
            if (want_matrix) {
                const Eigen::Index keep =
                    std::min<Eigen::Index>(loaded.n(), static_cast<Eigen::Index>(matrix_rows));
                shell.vocab.assign(loaded.vocab.begin(), loaded.vocab.begin() + keep);
                shell.matrix = loaded.matrix.topRows(keep);
                shell.length_normalized = loaded.length_normalized;
            }
            if (compute_spectrum) {
                if (!cfg.no_center) loaded = mean_center(std::move(loaded));
                Spectrum spec;
                {
                    ClogCapture capture;
                    spec = singular_values(loaded);
                }
                spectra[i] = std::move(spec);
                if (!cfg.no_cache) cache_store(sidecar, key, *spectra[i]);
            }
        }
        spaces.push_back(std::move(shell));
    }

    PairwiseOptions opts;
    opts.measures = measures;
    opts.svg_top_k = cfg.svg_top_k > 0 ? std::optional<int>(cfg.svg_top_k) : std::nullopt;
    opts.combiner = combiner_from_name(cfg.combiner);
    opts.is_top_n = cfg.is_top_n;
    opts.is_k = cfg.is_k;
    opts.is_mass = cfg.is_mass;
    opts.gh_sample = cfg.gh_sample;
    opts.workers = cfg.workers;

    if (want_matrix) {
        Eigen::Index min_n = std::numeric_limits<Eigen::Index>::max();
        for (const EmbeddingSpace& s : spaces) min_n = std::min(min_n, s.n());
        if (want_is && opts.is_top_n > min_n) {
            opts.is_top_n = static_cast<int>(min_n);
            diag("warning", "is-top-n clamped to " + std::to_string(min_n) + " (smallest vocabulary)");
        }
        if (want_gh && opts.gh_sample > min_n) {
            opts.gh_sample = static_cast<int>(min_n);
            diag("warning", "gh-sample clamped to " + std::to_string(min_n) + " (smallest vocabulary)");
        }
    }

    PairwiseResult result;
    {
        ClogCapture capture;
        result = pairwise_matrix(spaces, opts, spectra);
    }

    std::string payload;
    if (cfg.format == "csv") {
        std::ostringstream os;
        pair_scores_to_csv(result.scores, os);
        payload = os.str();
    } else {
        nlohmann::ordered_json scores = nlohmann::ordered_json::array();
        for (const PairScore& s : result.scores) {
            scores.push_back({{"lang_a", s.lang_a},
                              {"lang_b", s.lang_b},
                              {"measure", measure_name(s.measure)},
                              {"value", s.value},
                              {"params", s.params}});
        }
        nlohmann::ordered_json failures = nlohmann::ordered_json::array();
        for (const PairFailure& f : result.failures) {
            failures.push_back({{"lang_a", f.lang_a},
                                {"lang_b", f.lang_b},
                                {"measure", measure_name(f.measure)},
                                {"reason", f.reason}});
        }
        payload = dump_json({{"scores", std::move(scores)}, {"failures", std::move(failures)}});
    }
    emit_payload(cfg, payload);

    for (const PairFailure& f : result.failures) {
        diag_obj({{"level", "warning"},
                  {"message", "pair cell failed"},
                  {"lang_a", f.lang_a},
                  {"lang_b", f.lang_b},
                  {"measure", measure_name(f.measure)},
                  {"reason", f.reason}});
    }
    if (!result.failures.empty()) {
        diag("warning", std::to_string(result.failures.size()) + " of " +
                            std::to_string(result.scores.size() + result.failures.size()) + " cells failed");
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// correlate

int run_correlate(const RunConfig& cfg) {
    auto pairs = load_pair_scores_csv(cfg.pairs_path);
    auto perf = load_performance_csv(cfg.perf_path);

    CorrelationTable table = correlate_measures(pairs, perf, cfg.task);
    std::vector<CorrelationEntry> uriel = uriel_correlations(perf, cfg.task);

    std::vector<const CorrelationEntry*> all;
    for (const CorrelationEntry& e : table.entries) all.push_back(&e);
    for (const CorrelationEntry& e : uriel) all.push_back(&e);

    std::string payload;
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "label,r,n,logged\n";
        for (const CorrelationEntry* e : all)
            os << e->label << ',' << format_g17(e->r) << ',' << e->n << ',' << (e->logged ? "true" : "false")
               << '\n';
        payload = os.str();
    } else {
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        for (const CorrelationEntry* e : all)
            entries.push_back({{"label", e->label}, {"r", e->r}, {"n", e->n}, {"logged", e->logged}});
        nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
        for (const auto& [label, reason] : table.skipped) skipped.push_back({{"label", label}, {"reason", reason}});
        nlohmann::ordered_json j;
        j["entries"] = std::move(entries);
        j["skipped"] = std::move(skipped);
        j["joined_rows"] = table.joined_rows;
        j["unmatched_count"] = table.unmatched_count;
        j["unmatched_sample"] = table.unmatched_sample;
        payload = dump_json(j);
    }
    emit_payload(cfg, payload);

    for (const auto& [label, reason] : table.skipped)
        diag_obj({{"level", "warning"}, {"message", "measure skipped"}, {"label", label}, {"reason", reason}});
    if (table.unmatched_count > 0)
        diag_obj({{"level", "warning"},
                  {"message", std::to_string(table.unmatched_count) + " performance pairs matched no score"},
                  {"sample", table.unmatched_sample}});

    if (!cfg.plot.empty()) {
        if (table.entries.empty()) throw compute_error("nothing to plot: every measure was skipped");
        const CorrelationEntry& pick = table.entries.front();
        std::vector<double> xs, ys;
        xs.reserve(pick.points.size());
        ys.reserve(pick.points.size());
        for (const auto& [x, y] : pick.points) {
            xs.push_back(x);
            ys.push_back(y);
        }
        ScatterOptions so;
        so.x_label = pick.logged ? "ln " + pick.label : pick.label;
        so.y_label = "ln score";
        so.title = pick.label + " vs " + (cfg.task.empty() ? std::string("task score") : cfg.task + " score");
        so.annotation = "r = " + fmt3(pick.r);
        std::ofstream out(cfg.plot, std::ios::binary);
        if (!out) throw io_error(cfg.plot + ": cannot open plot file");
        out << scatter_svg(xs, ys, so);
        out.close();
        if (!out) throw io_error(cfg.plot + ": write failed");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// regress

int run_regress(const RunConfig& cfg) {
    auto pairs = load_pair_scores_csv(cfg.pairs_path);
    auto perf = load_performance_csv(cfg.perf_path);
    auto rows = filter_task_rows(perf, cfg.task);
    if (rows.empty())
        throw compute_error("no performance rows" +
                            (cfg.task.empty() ? std::string() : " for task \"" + cfg.task + "\""));
    auto index = index_pair_scores(pairs);

    std::vector<std::string> names;
    if (cfg.candidates.empty()) {
        for (const auto& [label, _] : index) names.push_back(label);
        if (perf.has_phy) names.push_back("phy");
        if (perf.has_typ) names.push_back("typ");
        if (perf.has_geo) names.push_back("geo");
    } else {
        names = split_list(cfg.candidates);
    }
    if (names.empty()) throw compute_error("no candidate columns available");
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
        throw std::invalid_argument("duplicate candidate column");

    auto is_uriel = [](const std::string& nm) { return nm == "phy" || nm == "typ" || nm == "geo"; };
    for (const std::string& nm : names) {
        if (is_uriel(nm)) {
            const bool present = (nm == "phy" && perf.has_phy) || (nm == "typ" && perf.has_typ) ||
                                 (nm == "geo" && perf.has_geo);
            if (!present)
                throw compute_error("candidate \"" + nm + "\" is not a column of the performance table");
        } else if (!index.count(nm)) {
            throw compute_error("candidate \"" + nm + "\" is not present in the pair-score file");
        }
    }

    // Directed performance rows join the symmetric pair values; a row enters
    // the regression only when every candidate has a value for it. Measures
    // and scores go through the log, the linguistic distances stay raw.
    std::vector<NamedColumn> cols(names.size());
    for (std::size_t j = 0; j < names.size(); ++j) cols[j].name = names[j];
    std::vector<double> y;
    std::size_t dropped = 0;

    for (const PerfRow* row : rows) {
        std::vector<double> vals(names.size());
        bool ok = row->score > 0.0;
        for (std::size_t j = 0; ok && j < names.size(); ++j) {
            const std::string& nm = names[j];
            if (is_uriel(nm)) {
                auto v = nm == "phy" ? row->phy : nm == "typ" ? row->typ : row->geo;
                if (!v) ok = false;
                else vals[j] = *v;
            } else {
                const auto& slot = index.at(nm);
                auto it = slot.find(pair_lookup_key(row->source, row->target));
                if (it == slot.end() || it->second <= 0.0) ok = false;
                else vals[j] = std::log(it->second);
            }
        }
        if (!ok) {
            ++dropped;
            continue;
        }
        y.push_back(std::log(row->score));
        for (std::size_t j = 0; j < names.size(); ++j) cols[j].values.push_back(vals[j]);
    }
    if (dropped > 0)
        diag("warning", std::to_string(dropped) + " rows dropped (missing or nonpositive values)");
    if (y.size() < 3)
        throw compute_error("only " + std::to_string(y.size()) + " usable rows after the join (need 3)");

    RegressionReport rep = stepwise_regression(cols, y, cfg.alpha);

    std::vector<int> indices; // 1-based positions in the candidate list
    for (const std::string& nm : rep.selected) {
        auto it = std::find(names.begin(), names.end(), nm);
        indices.push_back(static_cast<int>(it - names.begin()) + 1);
    }
    std::string annotation = fmt3(rep.r_hat);
    if (!indices.empty()) annotation += "^{" + collapse_indices(indices) + "}";

    std::string payload;
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "term,candidate_index,beta,p_value,r_hat,r_squared,n_obs,annotation\n";
        const std::string tail = format_g17(rep.r_hat) + "," + format_g17(rep.r_squared) + "," +
                                 std::to_string(rep.n_obs) + "," + csvu::quote_field(annotation);
        os << "(intercept),," << format_g17(rep.beta[0]) << ",," << tail << '\n';
        for (std::size_t i = 0; i < rep.selected.size(); ++i)
            os << csvu::quote_field(rep.selected[i]) << ',' << indices[i] << ',' << format_g17(rep.beta[i + 1])
               << ',' << format_g17(rep.p_values[i]) << ',' << tail << '\n';
        payload = os.str();
    } else {
        nlohmann::ordered_json j;
        j["candidates"] = names;
        j["selected"] = rep.selected;
        j["selected_indices"] = indices;
        j["beta"] = rep.beta;
        j["p_values"] = rep.p_values;
        j["r_squared"] = rep.r_squared;
        j["r_hat"] = rep.r_hat;
        j["n_obs"] = rep.n_obs;
        j["annotation"] = annotation;
        j["dropped_rows"] = dropped;
        payload = dump_json(j);
    }
    emit_payload(cfg, payload);
    return 0;
}

// ---------------------------------------------------------------------------
// select

int run_select(const RunConfig& cfg) {
    auto pairs = load_pair_scores_csv(cfg.pairs_path);
    auto perf = load_performance_csv(cfg.perf_path);
    SelectionReport rep =
        selection_analysis(pairs, perf, selection_mode_from_name(cfg.mode), cfg.task, cfg.min_group);

    // The paper-style summary cell: mean r with the share of groups won.
    auto annotate = [&](const std::string& label) {
        std::string out = fmt2(rep.mean_r.at(label));
        double win = rep.win_pct.at(label);
        if (win > 0.0) out += "^{" + fmt_pct(win) + "%}";
        return out;
    };

    std::string multi_label;
    for (std::size_t i = 0; i < rep.multi_regressors.size(); ++i) {
        if (i) multi_label += '+';
        multi_label += rep.multi_regressors[i];
    }

    std::string payload;
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "scope,group,n_rows,label,r,win_pct,annotation\n";
        for (const GroupResult& g : rep.groups)
            for (const auto& [label, r] : g.r)
                os << "group," << csvu::quote_field(g.group_lang) << ',' << g.n_rows << ',' << label << ','
                   << format_g17(r) << ",,\n";
        for (const auto& [label, mean] : rep.mean_r)
            os << "mean,,," << label << ',' << format_g17(mean) << ',' << format_g17(rep.win_pct.at(label))
               << ',' << csvu::quote_field(annotate(label)) << '\n';
        os << "best,,," << rep.best_measure << ",,,\n";
        if (rep.multi_ok)
            os << "multi,,," << csvu::quote_field(multi_label) << ',' << format_g17(rep.multi_r_hat) << ",,\n";
        payload = os.str();
    } else {
        nlohmann::ordered_json groups = nlohmann::ordered_json::array();
        for (const GroupResult& g : rep.groups)
            groups.push_back({{"group", g.group_lang}, {"n_rows", g.n_rows}, {"r", g.r}});
        nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
        for (const auto& [group, reason] : rep.skipped)
            skipped.push_back({{"group", group}, {"reason", reason}});
        nlohmann::ordered_json annotations = nlohmann::ordered_json::object();
        for (const auto& [label, _] : rep.mean_r) annotations[label] = annotate(label);
        nlohmann::ordered_json j;
        j["mode"] = selection_mode_name(rep.mode);
        j["groups"] = std::move(groups);
        j["skipped"] = std::move(skipped);
        j["mean_r"] = rep.mean_r;
        j["win_pct"] = rep.win_pct;
        j["annotations"] = std::move(annotations);
        j["best_measure"] = rep.best_measure;
        j["multi_regressors"] = rep.multi_regressors;
        j["multi_r_hat"] = rep.multi_r_hat;
        j["multi_ok"] = rep.multi_ok;
        payload = dump_json(j);
    }
    emit_payload(cfg, payload);

    for (const auto& [group, reason] : rep.skipped)
        diag_obj({{"level", "warning"}, {"message", "group skipped"}, {"group", group}, {"reason", reason}});
    if (!rep.multi_ok)
        diag_obj({{"level", "warning"}, {"message", "pooled regression failed"}, {"reason", rep.multi_note}});
    return 0;
}

} // namespace

int cmd_stats(const RunConfig& cfg) { return run_stats(cfg); }
int cmd_distance(const RunConfig& cfg) { return run_distance(cfg); }
int cmd_correlate(const RunConfig& cfg) { return run_correlate(cfg); }
int cmd_regress(const RunConfig& cfg) { return run_regress(cfg); }
int cmd_select(const RunConfig& cfg) { return run_select(cfg); }

} // namespace isoglot::cli
