#pragma once

#include "isoglot/embedding.hpp"
#include "isoglot/spectrum.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace isoglot {

enum class Measure { SVG, COND_HM, ECOND_HM, GH, IS };

// Token used in CLI arguments, CSV files and report keys.
std::string measure_name(Measure m);
Measure measure_from_name(const std::string& name);

// One pairwise distance record. Pairs are canonicalized lang_a <= lang_b,
// which is lossless because every measure here is symmetric.
struct PairScore {
    std::string lang_a;
    std::string lang_b;
    Measure measure = Measure::SVG;
    double value = 0.0;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

// How the two per-space statistics are folded into one number. The harmonic
// mean is the default; min and max exist for ablation.
enum class Combiner { HarmonicMean, Min, Max };
Combiner combiner_from_name(const std::string& name);
std::string combiner_name(Combiner c);

// 2ab / (a+b). Requires a, b > 0. Lies between min and max of the inputs and
// leans toward the smaller one.
double harmonic_mean(double a, double b);

double combine(double a, double b, Combiner c);

// Harmonic mean (or min/max) of the two condition numbers.
PairScore cond_hm(const Spectrum& a, const Spectrum& b, Combiner c = Combiner::HarmonicMean);

// Same over the effective condition numbers.
PairScore econd_hm(const Spectrum& a, const Spectrum& b, Combiner c = Combiner::HarmonicMean);

// Sum over the first k of (ln sigma_i^a - ln sigma_i^b)^2, k = min(top_k, d).
// top_k = nullopt compares whole spectra; unequal dimensions then compare over
// min(d_a, d_b) with a warning on stderr. Any used singular value at or below
// 1e-12 * sigma_1 of its spectrum is an error.
PairScore svg(const Spectrum& a, const Spectrum& b, std::optional<int> top_k = std::nullopt);

struct PairwiseOptions {
    std::set<Measure> measures{Measure::SVG, Measure::COND_HM, Measure::ECOND_HM};
    std::optional<int> svg_top_k;       // nullopt = full spectra
    Combiner combiner = Combiner::HarmonicMean;
    int is_top_n = 10000;
    int is_k = 10;
    double is_mass = 0.9;
    int gh_sample = 5000;
    unsigned workers = 0;               // 0 = hardware concurrency
};

struct PairFailure {
    std::string lang_a;
    std::string lang_b;
    Measure measure = Measure::SVG;
    std::string reason;
};

struct PairwiseResult {
    std::vector<PairScore> scores;      // sorted by (lang_a, lang_b, measure token)
    std::vector<PairFailure> failures;  // same order
};

// All requested measures over all unordered space pairs. Spectra are computed
// once per space and shared. Failures are recorded per cell instead of
// aborting the batch. Output order is deterministic and independent of the
// worker count.
//
// precomputed, when non-empty, must hold one entry per space; a set entry is
// used in place of computing that space's spectrum, so callers with cached
// spectra can pass matrix-less spaces as long as lang_id is filled in.
PairwiseResult pairwise_matrix(const std::vector<EmbeddingSpace>& spaces, const PairwiseOptions& opts,
                               const std::vector<std::optional<Spectrum>>& precomputed = {});

// CSV serialization: header "lang_a,lang_b,measure,value,params_json".
void pair_scores_to_csv(const std::vector<PairScore>& scores, std::ostream& out);
std::vector<PairScore> pair_scores_from_csv(std::istream& in, const std::string& origin = "<stream>");
std::vector<PairScore> load_pair_scores_csv(const std::string& path);

} // namespace isoglot
