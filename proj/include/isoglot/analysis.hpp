#pragma once

#include "isoglot/measures.hpp"
#include "isoglot/stats.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isoglot {

// One task-performance observation. Task tables are directional
// (source -> target); the isomorphism measures they are correlated against
// are symmetric, so each directed row joins the unordered pair's single value.
struct PerfRow {
    std::string source;
    std::string target;
    std::string task;
    double score = 0.0;
    std::optional<double> phy, typ, geo;
};

struct PerformanceTable {
    std::vector<PerfRow> rows;
    bool has_phy = false;
    bool has_typ = false;
    bool has_geo = false;
};

// CSV with header "source,target,task,score" plus any subset of the optional
// distance columns phy, typ, geo. Empty distance cells mean missing.
PerformanceTable performance_from_csv(std::istream& in, const std::string& origin = "<stream>");
PerformanceTable load_performance_csv(const std::string& path);

struct RegressionReport {
    std::vector<std::string> selected; // in admission order (for ols: input order)
    std::vector<double> beta;          // intercept first, then one per selected
    std::vector<double> p_values;      // per selected: entry p-value (stepwise) or final t-test (ols)
    double r_squared = 0.0;
    double r_hat = 0.0;
    int n_obs = 0;
};

// Ordinary least squares on a design matrix whose first column is the
// intercept. names labels the remaining columns. Rank deficiency is an error.
RegressionReport ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                     const std::vector<std::string>& names);

struct NamedColumn {
    std::string name;
    std::vector<double> values;
};

// Forward stepwise selection: at each step the candidate with the smallest
// t-test p-value in the augmented model is admitted if that p-value is below
// alpha. A constant candidate column is an error named after the column;
// candidates collinear with the admitted set are skipped. When nothing ever
// qualifies the result is the intercept-only model with r_hat = 0.
RegressionReport stepwise_regression(const std::vector<NamedColumn>& candidates,
                                     const std::vector<double>& y, double alpha = 0.01);

struct CorrelationEntry {
    std::string label;   // measure token, or phy/typ/geo
    double r = 0.0;
    int n = 0;
    bool logged = false; // whether the x side went through the log transform
    // The joined observations after any transform, so a scatter plot of them
    // reproduces exactly the data behind r.
    std::vector<std::pair<double, double>> points;
};

struct CorrelationTable {
    std::vector<CorrelationEntry> entries;                       // sorted by label
    std::vector<std::pair<std::string, std::string>> skipped;    // label -> reason
    std::vector<std::string> unmatched_sample;                   // up to 5 "source->target" keys
    std::size_t unmatched_count = 0;
    std::size_t joined_rows = 0;
};

// Per-measure Pearson correlation between log measure values and log task
// scores, joining symmetric pair scores against directional task rows.
// task_filter empty means all rows. Errors when the join is empty.
CorrelationTable correlate_measures(const std::vector<PairScore>& pairs, const PerformanceTable& perf,
                                    const std::string& task_filter = "");

// Correlations of the precomputed linguistic distance columns (taken raw)
// against log task scores, for tables that carry them.
std::vector<CorrelationEntry> uriel_correlations(const PerformanceTable& perf,
                                                 const std::string& task_filter = "");

// Canonical unordered-pair join key, exposed so front ends can build the same
// joins the analyses use. Treat the returned string as opaque.
std::string pair_lookup_key(const std::string& a, const std::string& b);

// measure token -> (pair key -> value). Exact duplicate records collapse;
// conflicting values for the same pair are an error.
std::map<std::string, std::map<std::string, double>> index_pair_scores(const std::vector<PairScore>& pairs);

// Rows matching the task filter (empty = all), in table order. Pointers stay
// valid as long as the table does.
std::vector<const PerfRow*> filter_task_rows(const PerformanceTable& perf, const std::string& task_filter);

enum class SelectionMode { SourceSelection, TargetSelection };
SelectionMode selection_mode_from_name(const std::string& name);
std::string selection_mode_name(SelectionMode mode);

struct GroupResult {
    std::string group_lang;
    int n_rows = 0;
    std::map<std::string, double> r; // label -> correlation within the group
};

struct SelectionReport {
    SelectionMode mode = SelectionMode::SourceSelection;
    std::vector<GroupResult> groups;                          // surviving, sorted by language
    std::vector<std::pair<std::string, std::string>> skipped; // group -> reason
    std::map<std::string, double> mean_r;
    std::map<std::string, double> win_pct;                    // share of groups won, ties split
    std::string best_measure;                                 // isomorphism label with max |mean r|
    std::vector<std::string> multi_regressors;
    double multi_r_hat = 0.0;
    bool multi_ok = false;
    std::string multi_note;
};

// The per-fixed-language selection study: source selection groups rows by
// target language (ranking candidate sources), target selection by source.
// Groups need at least min_group usable rows; the rest are skipped with a
// reason. Reports per-group correlations, means, win percentages, and the
// r_hat of one pooled multiple regression combining the best isomorphism
// measure with the available linguistic distance columns.
SelectionReport selection_analysis(const std::vector<PairScore>& pairs, const PerformanceTable& perf,
                                   SelectionMode mode, const std::string& task_filter = "",
                                   int min_group = 3);

} // namespace isoglot
