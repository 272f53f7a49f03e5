#include "isoglot/analysis.hpp"
#include "isoglot/common.hpp"

#include "csv_util.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace isoglot {

namespace {

constexpr double kPerfectFitRatio = 1e-14;

} // namespace

std::string pair_lookup_key(const std::string& a, const std::string& b) {
    return a <= b ? a + "\x1f" + b : b + "\x1f" + a;
}

PerformanceTable performance_from_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw io_error(origin + ": empty performance CSV");
    auto header = csvu::split_record(csvu::strip_cr(line));
    if (header.size() < 4 || header[0] != "source" || header[1] != "target" || header[2] != "task" ||
        header[3] != "score")
        throw io_error(origin + ":1: bad header, expected source,target,task,score[,phy,typ,geo]");

    PerformanceTable table;
    int phy_col = -1, typ_col = -1, geo_col = -1;
    for (std::size_t c = 4; c < header.size(); ++c) {
        if (header[c] == "phy") phy_col = static_cast<int>(c);
        else if (header[c] == "typ") typ_col = static_cast<int>(c);
        else if (header[c] == "geo") geo_col = static_cast<int>(c);
        else throw io_error(origin + ":1: unknown column \"" + header[c] + "\"");
    }
    table.has_phy = phy_col >= 0;
    table.has_typ = typ_col >= 0;
    table.has_geo = geo_col >= 0;

    std::set<std::tuple<std::string, std::string, std::string>> keys;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = csvu::strip_cr(line);
        if (line.empty()) continue;
        auto fields = csvu::split_record(line);
        if (fields.size() != header.size())
            throw io_error(origin + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));

        PerfRow row;
        row.source = fields[0];
        row.target = fields[1];
        row.task = fields[2];
        if (!keys.insert({row.source, row.target, row.task}).second)
            throw io_error(origin + ":" + std::to_string(lineno) + ": duplicate key (" + row.source + ", " +
                           row.target + ", " + row.task + ")");

        auto parse_cell = [&](const std::string& text, const char* what) {
            try {
                double v = std::stod(text);
                if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
                return v;
            } catch (const std::exception&) {
                throw io_error(origin + ":" + std::to_string(lineno) + ": unparseable " + what + " \"" + text +
                               "\"");
            }
        };
        row.score = parse_cell(fields[3], "score");

        auto parse_dist = [&](int col, const char* what) -> std::optional<double> {
            if (col < 0 || fields[static_cast<std::size_t>(col)].empty()) return std::nullopt;
            double v = parse_cell(fields[static_cast<std::size_t>(col)], what);
            if (v < 0.0)
                throw io_error(origin + ":" + std::to_string(lineno) + ": negative " + std::string(what));
            return v;
        };
        row.phy = parse_dist(phy_col, "phy");
        row.typ = parse_dist(typ_col, "typ");
        row.geo = parse_dist(geo_col, "geo");

        table.rows.push_back(std::move(row));
    }
    return table;
}

PerformanceTable load_performance_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path + ": cannot open file");
    return performance_from_csv(in, path);
}

namespace {

struct FitResult {
    Eigen::VectorXd beta;
    double rss = 0.0;
    bool full_rank = false;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

FitResult fit_qr(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    FitResult fit;
    fit.qr.compute(design);
    fit.full_rank = fit.qr.rank() == design.cols();
    if (!fit.full_rank) return fit;
    fit.beta = fit.qr.solve(y);
    fit.rss = (y - design * fit.beta).squaredNorm();
    return fit;
}

// Standard error of coefficient j without forming the normal equations:
// with X = Q R P^T, the (j, j) entry of (X^T X)^{-1} is the squared norm of
// R^{-T} P^T e_j.
double coef_se(const FitResult& fit, Eigen::Index j, double sigma2) {
    const Eigen::Index p = fit.qr.matrixQR().cols();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(p);
    e(j) = 1.0;
    Eigen::VectorXd v = fit.qr.colsPermutation().transpose() * e;
    Eigen::MatrixXd r = fit.qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    Eigen::VectorXd w = r.transpose().triangularView<Eigen::Lower>().solve(v);
    return std::sqrt(sigma2 * w.squaredNorm());
}

double total_sum_squares(const Eigen::VectorXd& y) {
    return (y.array() - y.mean()).square().sum();
}

} // namespace

RegressionReport ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                     const std::vector<std::string>& names) {
    const Eigen::Index n = design.rows();
    const Eigen::Index p = design.cols();
    if (n != y.size()) throw std::invalid_argument("ols: design and response sizes differ");
    if (static_cast<Eigen::Index>(names.size()) != p - 1)
        throw std::invalid_argument("ols: expected one name per non-intercept column");
    if (n <= p) throw std::invalid_argument("ols: need more observations than coefficients");

    const double tss = total_sum_squares(y);
    if (tss <= 0.0) throw compute_error("ols: response has zero variance");

    FitResult fit = fit_qr(design, y);
    if (!fit.full_rank) {
        // Identify a culprit for the message: the first column that is (near)
        // constant, otherwise report generic collinearity.
        for (Eigen::Index j = 1; j < p; ++j) {
            Eigen::VectorXd col = design.col(j);
            if ((col.array() - col.mean()).abs().maxCoeff() < 1e-12)
                throw compute_error("ols: rank deficiency, column \"" + names[static_cast<std::size_t>(j - 1)] +
                                    "\" is constant");
        }
        throw compute_error("ols: rank deficiency, regressors are collinear");
    }

    RegressionReport report;
    report.selected = names;
    report.n_obs = static_cast<int>(n);
    report.beta.assign(fit.beta.data(), fit.beta.data() + fit.beta.size());
    report.r_squared = 1.0 - fit.rss / tss;
    if (report.r_squared < 0.0) report.r_squared = 0.0;
    if (report.r_squared > 1.0) report.r_squared = 1.0;
    report.r_hat = std::sqrt(report.r_squared);

    const double dof = static_cast<double>(n - p);
    const double sigma2 = fit.rss / dof;
    for (Eigen::Index j = 1; j < p; ++j) {
        double se = coef_se(fit, j, sigma2);
        if (se == 0.0) {
            report.p_values.push_back(0.0);
        } else {
            report.p_values.push_back(student_t_pvalue(fit.beta(j) / se, dof));
        }
    }
    return report;
}

RegressionReport stepwise_regression(const std::vector<NamedColumn>& candidates,
                                     const std::vector<double>& y, double alpha) {
    const std::size_t n = y.size();
    if (n < 3) throw std::invalid_argument("stepwise_regression: need at least 3 observations");
    if (alpha <= 0.0 || alpha > 1.0)
        throw std::invalid_argument("stepwise_regression: alpha must be in (0, 1]");
    for (const NamedColumn& c : candidates) {
        if (c.values.size() != n)
            throw std::invalid_argument("stepwise_regression: column \"" + c.name + "\" has length " +
                                        std::to_string(c.values.size()) + ", expected " + std::to_string(n));
        double lo = *std::min_element(c.values.begin(), c.values.end());
        double hi = *std::max_element(c.values.begin(), c.values.end());
        if (lo == hi)
            throw compute_error("stepwise_regression: rank deficiency, candidate column \"" + c.name +
                                "\" is constant");
        for (double v : c.values)
            if (!std::isfinite(v))
                throw std::invalid_argument("stepwise_regression: non-finite value in column \"" + c.name + "\"");
    }

    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));
    const double tss = total_sum_squares(yv);
    if (tss <= 0.0) throw compute_error("stepwise_regression: response has zero variance");

    std::vector<std::size_t> remaining(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) remaining[i] = i;

    std::vector<std::size_t> selected_idx;
    std::vector<double> entry_p;

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 1);
    design.setOnes();
    double rss_cur = tss;

    for (;;) {
        const Eigen::Index trial_cols = design.cols() + 1;
        const double dof = static_cast<double>(static_cast<Eigen::Index>(n) - trial_cols);
        if (dof < 1.0 || remaining.empty()) break;
        if (rss_cur <= kPerfectFitRatio * tss) break; // already a perfect fit

        double best_p = std::numeric_limits<double>::infinity();
        std::size_t best_pos = remaining.size();

        Eigen::MatrixXd trial(static_cast<Eigen::Index>(n), trial_cols);
        trial.leftCols(design.cols()) = design;

        for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
            const NamedColumn& cand = candidates[remaining[pos]];
            trial.col(trial_cols - 1) =
                Eigen::Map<const Eigen::VectorXd>(cand.values.data(), static_cast<Eigen::Index>(n));

            FitResult fit = fit_qr(trial, yv);
            if (!fit.full_rank) continue; // collinear with the current model

            double p_val;
            const double sigma2 = fit.rss / dof;
            double se = coef_se(fit, trial_cols - 1, sigma2);
            if (se == 0.0 || fit.rss <= kPerfectFitRatio * tss) {
                p_val = 0.0;
            } else {
                p_val = student_t_pvalue(fit.beta(trial_cols - 1) / se, dof);
            }
            if (p_val < best_p) {
                best_p = p_val;
                best_pos = pos;
            }
        }

        if (best_pos == remaining.size() || best_p >= alpha) break;

        const std::size_t admit = remaining[best_pos];
        const NamedColumn& cand = candidates[admit];
        Eigen::MatrixXd grown(static_cast<Eigen::Index>(n), trial_cols);
        grown.leftCols(design.cols()) = design;
        grown.col(trial_cols - 1) =
            Eigen::Map<const Eigen::VectorXd>(cand.values.data(), static_cast<Eigen::Index>(n));
        design.swap(grown);

        FitResult fit = fit_qr(design, yv);
        rss_cur = fit.rss;
        selected_idx.push_back(admit);
        entry_p.push_back(best_p);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));
    }

    RegressionReport report;
    report.n_obs = static_cast<int>(n);
    report.p_values = entry_p;
    for (std::size_t idx : selected_idx) report.selected.push_back(candidates[idx].name);

    FitResult fit = fit_qr(design, yv);
    report.beta.assign(fit.beta.data(), fit.beta.data() + fit.beta.size());
    report.r_squared = selected_idx.empty() ? 0.0 : 1.0 - fit.rss / tss;
    if (report.r_squared < 0.0) report.r_squared = 0.0;
    if (report.r_squared > 1.0) report.r_squared = 1.0;
    report.r_hat = std::sqrt(report.r_squared);
    return report;
}

std::map<std::string, std::map<std::string, double>> index_pair_scores(const std::vector<PairScore>& pairs) {
    std::map<std::string, std::map<std::string, double>> index;
    for (const PairScore& s : pairs) {
        auto& slot = index[measure_name(s.measure)];
        auto key = pair_lookup_key(s.lang_a, s.lang_b);
        auto [it, inserted] = slot.emplace(key, s.value);
        if (!inserted && it->second != s.value)
            throw compute_error("conflicting values for measure " + measure_name(s.measure) + " on pair (" +
                                s.lang_a + ", " + s.lang_b + ")");
    }
    return index;
}

std::vector<const PerfRow*> filter_task_rows(const PerformanceTable& perf, const std::string& task_filter) {
    std::vector<const PerfRow*> rows;
    for (const PerfRow& row : perf.rows)
        if (task_filter.empty() || row.task == task_filter) rows.push_back(&row);
    return rows;
}

CorrelationTable correlate_measures(const std::vector<PairScore>& pairs, const PerformanceTable& perf,
                                    const std::string& task_filter) {
    if (pairs.empty()) throw std::invalid_argument("correlate_measures: no pair scores");
    auto index = index_pair_scores(pairs);
    auto rows = filter_task_rows(perf, task_filter);
    if (rows.empty())
        throw compute_error("correlate_measures: no performance rows" +
                            (task_filter.empty() ? std::string() : " for task \"" + task_filter + "\""));

    CorrelationTable table;
    std::set<std::string> joined_keys;

    for (const auto& [label, values] : index) {
        std::vector<double> xs, ys;
        for (const PerfRow* row : rows) {
            auto it = values.find(pair_lookup_key(row->source, row->target));
            if (it == values.end()) continue;
            joined_keys.insert(row->source + "->" + row->target);
            xs.push_back(it->second);
            ys.push_back(row->score);
        }
        if (xs.size() < 3) {
            table.skipped.emplace_back(label, "only " + std::to_string(xs.size()) + " joined rows (need 3)");
            continue;
        }
        CorrelationEntry entry;
        entry.label = label;
        entry.n = static_cast<int>(xs.size());
        entry.logged = true;
        auto lx = log_transform(xs);
        auto ly = log_transform(ys);
        entry.r = pearson(lx, ly);
        entry.points.reserve(lx.size());
        for (std::size_t i = 0; i < lx.size(); ++i) entry.points.emplace_back(lx[i], ly[i]);
        table.entries.push_back(std::move(entry));
    }

    table.joined_rows = joined_keys.size();

    // A row is unmatched when its language pair joined under no measure at
    // all, which usually means the pair is absent from the score file.
    std::set<std::string> unmatched_keys;
    for (const PerfRow* row : rows) {
        std::string key = row->source + "->" + row->target;
        if (joined_keys.count(key)) continue;
        if (unmatched_keys.insert(key).second && table.unmatched_sample.size() < 5)
            table.unmatched_sample.push_back(key);
    }
    table.unmatched_count = unmatched_keys.size();

    if (table.joined_rows == 0) {
        std::string msg = "correlate_measures: 0 joined rows; sample unmatched keys:";
        for (const auto& k : table.unmatched_sample) msg += " " + k;
        throw compute_error(msg);
    }
    return table;
}

std::vector<CorrelationEntry> uriel_correlations(const PerformanceTable& perf, const std::string& task_filter) {
    auto rows = filter_task_rows(perf, task_filter);
    std::vector<CorrelationEntry> entries;

    auto add = [&](const std::string& label, auto getter) {
        std::vector<double> xs, ys;
        for (const PerfRow* row : rows) {
            auto v = getter(*row);
            if (!v) continue;
            xs.push_back(*v);
            ys.push_back(row->score);
        }
        if (xs.size() < 3) return;
        CorrelationEntry entry;
        entry.label = label;
        entry.n = static_cast<int>(xs.size());
        entry.logged = false; // distances can be zero for related languages, so they stay raw
        auto ly = log_transform(ys);
        entry.r = pearson(xs, ly);
        entry.points.reserve(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) entry.points.emplace_back(xs[i], ly[i]);
        entries.push_back(std::move(entry));
    };

    if (perf.has_phy) add("phy", [](const PerfRow& r) { return r.phy; });
    if (perf.has_typ) add("typ", [](const PerfRow& r) { return r.typ; });
    if (perf.has_geo) add("geo", [](const PerfRow& r) { return r.geo; });
    return entries;
}

SelectionMode selection_mode_from_name(const std::string& name) {
    if (name == "source" || name == "source_selection") return SelectionMode::SourceSelection;
    if (name == "target" || name == "target_selection") return SelectionMode::TargetSelection;
    throw std::invalid_argument("unknown selection mode \"" + name + "\" (expected source or target)");
}

std::string selection_mode_name(SelectionMode mode) {
    return mode == SelectionMode::SourceSelection ? "source_selection" : "target_selection";
}

SelectionReport selection_analysis(const std::vector<PairScore>& pairs, const PerformanceTable& perf,
                                   SelectionMode mode, const std::string& task_filter, int min_group) {
    if (min_group < 3) throw std::invalid_argument("selection_analysis: min_group must be at least 3");
    auto index = index_pair_scores(pairs);
    if (index.empty()) throw std::invalid_argument("selection_analysis: no pair scores");
    auto rows = filter_task_rows(perf, task_filter);

    std::vector<std::string> iso_labels;
    for (const auto& [label, _] : index) iso_labels.push_back(label);

    std::vector<std::string> uriel_labels;
    if (perf.has_phy) uriel_labels.push_back("phy");
    if (perf.has_typ) uriel_labels.push_back("typ");
    if (perf.has_geo) uriel_labels.push_back("geo");

    // In source selection the target language is fixed per group and the
    // candidate sources vary; target selection is the mirror image.
    std::map<std::string, std::vector<const PerfRow*>> by_group;
    for (const PerfRow* row : rows)
        by_group[mode == SelectionMode::SourceSelection ? row->target : row->source].push_back(row);

    SelectionReport report;
    report.mode = mode;

    struct UsableRow {
        const PerfRow* row;
        std::map<std::string, double> values; // label -> regressor value (iso logged later)
    };
    std::vector<UsableRow> pooled;

    std::map<std::string, double> wins;

    for (const auto& [group_lang, group_rows] : by_group) {
        std::vector<UsableRow> usable;
        for (const PerfRow* row : group_rows) {
            UsableRow u{row, {}};
            bool ok = row->score > 0.0;
            for (const auto& label : iso_labels) {
                auto it = index[label].find(pair_lookup_key(row->source, row->target));
                if (it == index[label].end() || it->second <= 0.0) {
                    ok = false;
                    break;
                }
                u.values[label] = it->second;
            }
            if (ok)
                for (const auto& label : uriel_labels) {
                    auto v = label == "phy" ? row->phy : label == "typ" ? row->typ : row->geo;
                    if (!v) {
                        ok = false;
                        break;
                    }
                    u.values[label] = *v;
                }
            if (ok) usable.push_back(std::move(u));
        }

        if (static_cast<int>(usable.size()) < min_group) {
            report.skipped.emplace_back(group_lang, "only " + std::to_string(usable.size()) +
                                                        " usable rows (need " + std::to_string(min_group) + ")");
            continue;
        }

        GroupResult group;
        group.group_lang = group_lang;
        group.n_rows = static_cast<int>(usable.size());

        std::vector<double> log_scores;
        for (const UsableRow& u : usable) log_scores.push_back(std::log(u.row->score));

        bool group_ok = true;
        std::string fail_reason;
        for (const auto& label : iso_labels) {
            std::vector<double> xs;
            for (const UsableRow& u : usable) xs.push_back(std::log(u.values.at(label)));
            try {
                group.r[label] = pearson(xs, log_scores);
            } catch (const std::exception& e) {
                group_ok = false;
                fail_reason = std::string(e.what()) + " (measure " + label + ")";
                break;
            }
        }
        if (group_ok)
            for (const auto& label : uriel_labels) {
                std::vector<double> xs;
                for (const UsableRow& u : usable) xs.push_back(u.values.at(label));
                try {
                    group.r[label] = pearson(xs, log_scores);
                } catch (const std::exception& e) {
                    group_ok = false;
                    fail_reason = std::string(e.what()) + " (column " + label + ")";
                    break;
                }
            }
        if (!group_ok) {
            report.skipped.emplace_back(group_lang, fail_reason);
            continue;
        }

        // Winner of the group: largest |r|, ties split fractionally.
        double best_abs = -1.0;
        for (const auto& [label, r] : group.r) best_abs = std::max(best_abs, std::abs(r));
        std::vector<std::string> tied;
        for (const auto& [label, r] : group.r)
            if (std::abs(r) == best_abs) tied.push_back(label);
        for (const auto& label : tied) wins[label] += 1.0 / static_cast<double>(tied.size());

        report.groups.push_back(std::move(group));
        pooled.insert(pooled.end(), usable.begin(), usable.end());
    }

    if (report.groups.empty())
        throw compute_error("selection_analysis: no usable groups (all below the " +
                            std::to_string(min_group) + "-row floor)");

    const double n_groups = static_cast<double>(report.groups.size());
    for (const GroupResult& g : report.groups)
        for (const auto& [label, r] : g.r) report.mean_r[label] += r;
    for (auto& [label, sum] : report.mean_r) sum /= n_groups;
    for (const auto& [label, w] : wins) report.win_pct[label] = 100.0 * w / n_groups;
    for (const auto& [label, _] : report.mean_r)
        if (!report.win_pct.count(label)) report.win_pct[label] = 0.0;

    // Best isomorphism measure by |mean r|; ties go to the first label.
    double best_abs = -1.0;
    for (const auto& label : iso_labels) {
        double a = std::abs(report.mean_r.at(label));
        if (a > best_abs) {
            best_abs = a;
            report.best_measure = label;
        }
    }

    // Pooled multiple regression over all surviving rows: log task score on
    // the log best measure plus the raw linguistic distances.
    report.multi_regressors.push_back(report.best_measure);
    for (const auto& label : uriel_labels) report.multi_regressors.push_back(label);
    try {
        const Eigen::Index n = static_cast<Eigen::Index>(pooled.size());
        const Eigen::Index p = static_cast<Eigen::Index>(report.multi_regressors.size()) + 1;
        Eigen::MatrixXd design(n, p);
        Eigen::VectorXd yv(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const UsableRow& u = pooled[static_cast<std::size_t>(i)];
            design(i, 0) = 1.0;
            design(i, 1) = std::log(u.values.at(report.best_measure));
            for (std::size_t j = 0; j < uriel_labels.size(); ++j)
                design(i, static_cast<Eigen::Index>(j) + 2) = u.values.at(uriel_labels[j]);
            yv(i) = std::log(u.row->score);
        }
        RegressionReport reg = ols(design, yv, report.multi_regressors);
        report.multi_r_hat = reg.r_hat;
        report.multi_ok = true;
    } catch (const std::exception& e) {
        report.multi_ok = false;
        report.multi_note = e.what();
        report.multi_r_hat = std::numeric_limits<double>::quiet_NaN();
    }

    return report;
}

} // namespace isoglot
