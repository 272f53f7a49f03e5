#include "isoglot/measures.hpp"
#include "isoglot/baselines.hpp"
#include "isoglot/common.hpp"
#include "isoglot/parallel.hpp"

#include "csv_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace isoglot {

std::string measure_name(Measure m) {
    switch (m) {
        case Measure::SVG: return "svg";
        case Measure::COND_HM: return "cond_hm";
        case Measure::ECOND_HM: return "econd_hm";
        case Measure::GH: return "gh";
        case Measure::IS: return "is";
    }
    throw std::invalid_argument("unknown measure enum value");
}

Measure measure_from_name(const std::string& name) {
    if (name == "svg") return Measure::SVG;
    if (name == "cond_hm") return Measure::COND_HM;
    if (name == "econd_hm") return Measure::ECOND_HM;
    if (name == "gh") return Measure::GH;
    if (name == "is") return Measure::IS;
    throw std::invalid_argument("unknown measure \"" + name + "\" (expected svg, cond_hm, econd_hm, gh or is)");
}

Combiner combiner_from_name(const std::string& name) {
    if (name == "hm") return Combiner::HarmonicMean;
    if (name == "min") return Combiner::Min;
    if (name == "max") return Combiner::Max;
    throw std::invalid_argument("unknown combiner \"" + name + "\" (expected hm, min or max)");
}

std::string combiner_name(Combiner c) {
    switch (c) {
        case Combiner::HarmonicMean: return "hm";
        case Combiner::Min: return "min";
        case Combiner::Max: return "max";
    }
    throw std::invalid_argument("unknown combiner enum value");
}

double harmonic_mean(double a, double b) {
    if (a <= 0.0 || b <= 0.0)
        throw std::invalid_argument("harmonic_mean: inputs must be positive, got " + format_g17(a) + ", " +
                                    format_g17(b));
    return 2.0 * a * b / (a + b);
}

double combine(double a, double b, Combiner c) {
    switch (c) {
        case Combiner::HarmonicMean: return harmonic_mean(a, b);
        case Combiner::Min: return std::min(a, b);
        case Combiner::Max: return std::max(a, b);
    }
    throw std::invalid_argument("unknown combiner enum value");
}

namespace {

PairScore make_score(const Spectrum& a, const Spectrum& b, Measure m, double value,
                     nlohmann::ordered_json params) {
    PairScore score;
    score.lang_a = a.source_lang;
    score.lang_b = b.source_lang;
    if (score.lang_b < score.lang_a) std::swap(score.lang_a, score.lang_b);
    score.measure = m;
    score.value = value;
    score.params = std::move(params);
    return score;
}

} // namespace

PairScore cond_hm(const Spectrum& a, const Spectrum& b, Combiner c) {
    double value = combine(condition_number(a), condition_number(b), c);
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    if (c != Combiner::HarmonicMean) params["combiner"] = combiner_name(c);
    return make_score(a, b, Measure::COND_HM, value, std::move(params));
}

PairScore econd_hm(const Spectrum& a, const Spectrum& b, Combiner c) {
    double value = combine(effective_condition_number(a), effective_condition_number(b), c);
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    if (c != Combiner::HarmonicMean) params["combiner"] = combiner_name(c);
    return make_score(a, b, Measure::ECOND_HM, value, std::move(params));
}

PairScore svg(const Spectrum& a, const Spectrum& b, std::optional<int> top_k) {
    if (a.d() == 0 || b.d() == 0) throw std::invalid_argument("svg: empty spectrum");

    Eigen::Index k;
    if (top_k) {
        if (*top_k <= 0) throw std::invalid_argument("svg: top_k must be positive");
        if (*top_k > a.d() || *top_k > b.d())
            throw std::invalid_argument("svg: top_k = " + std::to_string(*top_k) +
                                        " exceeds spectrum length (d_a = " + std::to_string(a.d()) +
                                        ", d_b = " + std::to_string(b.d()) + ")");
        k = *top_k;
    } else {
        k = std::min(a.d(), b.d());
        if (a.d() != b.d())
            std::clog << "warning: svg comparing spectra of different dimensionality (" << a.d() << " vs "
                      << b.d() << "), using the first " << k << " values\n";
    }

    auto checked_log = [](const Spectrum& s, Eigen::Index i) {
        double floor = kSingularFloor * s.sigma(0);
        if (s.sigma(i) <= floor)
            throw compute_error("svg: singular value " + std::to_string(i + 1) + " of \"" + s.source_lang +
                                "\" is at or below the floor " + format_g17(floor));
        return std::log(s.sigma(i));
    };

    double total = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        double gap = checked_log(a, i) - checked_log(b, i);
        total += gap * gap;
    }

    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    params["svg_top_k"] = top_k ? nlohmann::ordered_json(*top_k) : nlohmann::ordered_json("all");
    return make_score(a, b, Measure::SVG, total, std::move(params));
}

PairwiseResult pairwise_matrix(const std::vector<EmbeddingSpace>& spaces, const PairwiseOptions& opts,
                               const std::vector<std::optional<Spectrum>>& precomputed) {
    if (spaces.size() < 2) throw std::invalid_argument("pairwise_matrix: need at least 2 spaces");
    if (opts.measures.empty()) throw std::invalid_argument("pairwise_matrix: need at least 1 measure");
    if (!precomputed.empty() && precomputed.size() != spaces.size())
        throw std::invalid_argument("pairwise_matrix: precomputed spectra count does not match space count");

    const std::size_t n = spaces.size();

    const bool needs_spectra = opts.measures.count(Measure::SVG) || opts.measures.count(Measure::COND_HM) ||
                               opts.measures.count(Measure::ECOND_HM);

    // One spectrum per space, shared across all pairs it participates in.
    std::vector<Spectrum> spectra(n);
    std::vector<std::string> spectrum_errors(n);
    if (needs_spectra) {
        parallel_for(n, opts.workers, [&](std::size_t i) {
            try {
                if (!precomputed.empty() && precomputed[i]) spectra[i] = *precomputed[i];
                else spectra[i] = singular_values(spaces[i]);
            } catch (const std::exception& e) {
                spectrum_errors[i] = e.what();
            }
        });
    }

    struct Cell {
        std::size_t i, j;
        Measure measure;
    };
    std::vector<Measure> ordered(opts.measures.begin(), opts.measures.end());
    std::sort(ordered.begin(), ordered.end(),
              [](Measure a, Measure b) { return measure_name(a) < measure_name(b); });

    std::vector<Cell> cells;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (Measure m : ordered) cells.push_back({i, j, m});

    struct Outcome {
        bool ok = false;
        PairScore score;
        std::string reason;
    };
    std::vector<Outcome> outcomes(cells.size());

    parallel_for(cells.size(), opts.workers, [&](std::size_t c) {
        const Cell& cell = cells[c];
        Outcome& out = outcomes[c];
        try {
            switch (cell.measure) {
                case Measure::SVG:
                case Measure::COND_HM:
                case Measure::ECOND_HM: {
                    if (!spectrum_errors[cell.i].empty()) throw compute_error(spectrum_errors[cell.i]);
                    if (!spectrum_errors[cell.j].empty()) throw compute_error(spectrum_errors[cell.j]);
                    const Spectrum& sa = spectra[cell.i];
                    const Spectrum& sb = spectra[cell.j];
                    if (cell.measure == Measure::SVG) out.score = svg(sa, sb, opts.svg_top_k);
                    else if (cell.measure == Measure::COND_HM) out.score = cond_hm(sa, sb, opts.combiner);
                    else out.score = econd_hm(sa, sb, opts.combiner);
                    break;
                }
                case Measure::IS:
                    out.score = isospectrality(spaces[cell.i], spaces[cell.j], opts.is_top_n, opts.is_k,
                                               opts.is_mass);
                    break;
                case Measure::GH:
                    out.score = gromov_hausdorff(spaces[cell.i], spaces[cell.j], opts.gh_sample);
                    break;
            }
            out.ok = true;
        } catch (const std::exception& e) {
            out.reason = e.what();
        }
    });

    PairwiseResult result;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (outcomes[c].ok) {
            result.scores.push_back(std::move(outcomes[c].score));
        } else {
            const Cell& cell = cells[c];
            PairFailure f;
            f.lang_a = spaces[cell.i].lang_id;
            f.lang_b = spaces[cell.j].lang_id;
            if (f.lang_b < f.lang_a) std::swap(f.lang_a, f.lang_b);
            f.measure = cell.measure;
            f.reason = outcomes[c].reason;
            result.failures.push_back(std::move(f));
        }
    }

    auto key = [](const std::string& a, const std::string& b, Measure m) {
        return std::make_tuple(a, b, measure_name(m));
    };
    std::stable_sort(result.scores.begin(), result.scores.end(), [&](const PairScore& x, const PairScore& y) {
        return key(x.lang_a, x.lang_b, x.measure) < key(y.lang_a, y.lang_b, y.measure);
    });
    std::stable_sort(result.failures.begin(), result.failures.end(),
                     [&](const PairFailure& x, const PairFailure& y) {
                         return key(x.lang_a, x.lang_b, x.measure) < key(y.lang_a, y.lang_b, y.measure);
                     });
    return result;
}

void pair_scores_to_csv(const std::vector<PairScore>& scores, std::ostream& out) {
    out << "lang_a,lang_b,measure,value,params_json\n";
    for (const PairScore& s : scores) {
        out << csvu::quote_field(s.lang_a) << ',' << csvu::quote_field(s.lang_b) << ',' << measure_name(s.measure)
            << ',' << format_g17(s.value) << ',' << csvu::quote_field(s.params.dump()) << '\n';
    }
}

std::vector<PairScore> pair_scores_from_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw io_error(origin + ": empty pair-score CSV");
    auto header = csvu::split_record(csvu::strip_cr(line));
    const std::vector<std::string> expected{"lang_a", "lang_b", "measure", "value", "params_json"};
    if (header != expected)
        throw io_error(origin + ":1: bad header, expected lang_a,lang_b,measure,value,params_json");

    std::vector<PairScore> scores;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = csvu::strip_cr(line);
        if (line.empty()) continue;
        auto fields = csvu::split_record(line);
        if (fields.size() != 5)
            throw io_error(origin + ":" + std::to_string(lineno) + ": expected 5 fields, got " +
                           std::to_string(fields.size()));
        PairScore s;
        s.lang_a = fields[0];
        s.lang_b = fields[1];
        if (s.lang_b < s.lang_a) std::swap(s.lang_a, s.lang_b);
        try {
            s.measure = measure_from_name(fields[2]);
        } catch (const std::invalid_argument& e) {
            throw io_error(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
        try {
            s.value = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw io_error(origin + ":" + std::to_string(lineno) + ": unparseable value \"" + fields[3] + "\"");
        }
        if (!fields[4].empty()) {
            auto parsed = nlohmann::ordered_json::parse(fields[4], nullptr, false);
            if (parsed.is_discarded())
                throw io_error(origin + ":" + std::to_string(lineno) + ": params_json is not valid JSON");
            s.params = std::move(parsed);
        }
        scores.push_back(std::move(s));
    }
    return scores;
}

std::vector<PairScore> load_pair_scores_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path + ": cannot open file");
    return pair_scores_from_csv(in, path);
}

} // namespace isoglot
