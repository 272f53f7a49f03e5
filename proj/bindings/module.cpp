#include "isoglot/analysis.hpp"
#include "isoglot/baselines.hpp"
#include "isoglot/common.hpp"
#include "isoglot/embedding.hpp"
#include "isoglot/measures.hpp"
#include "isoglot/spectrum.hpp"
#include "isoglot/stats.hpp"
#include "isoglot/version.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace isoglot;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
    using value_t = nlohmann::ordered_json::value_t;
    switch (j.type()) {
        case value_t::null: return py::none();
        case value_t::boolean: return py::cast(j.get<bool>());
        case value_t::number_integer: return py::cast(j.get<long long>());
        case value_t::number_unsigned: return py::cast(j.get<unsigned long long>());
        case value_t::number_float: return py::cast(j.get<double>());
        case value_t::string: return py::cast(j.get<std::string>());
        case value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        default: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::cast(key)] = json_to_py(value);
            return out;
        }
    }
}

EmbeddingSpace space_from_matrix(const std::string& lang, Eigen::MatrixXd matrix,
                                 std::optional<std::vector<std::string>> vocab, bool normalized,
                                 bool centered) {
    EmbeddingSpace space;
    space.lang_id = lang;
    space.matrix = std::move(matrix);
    if (vocab) {
        if (static_cast<Eigen::Index>(vocab->size()) != space.matrix.rows())
            throw std::invalid_argument("vocab length must match the matrix row count");
        space.vocab = std::move(*vocab);
    } else {
        space.vocab.reserve(static_cast<std::size_t>(space.matrix.rows()));
        for (Eigen::Index i = 0; i < space.matrix.rows(); ++i)
            space.vocab.push_back("w" + std::to_string(i));
    }
    space.length_normalized = normalized;
    space.mean_centered = centered;
    return space;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral comparison of word embedding spaces";
    m.attr("__version__") = kVersion;

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const io_error& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        } catch (const compute_error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<EmbeddingSpace>(m, "EmbeddingSpace")
        .def_readonly("lang_id", &EmbeddingSpace::lang_id)
        .def_readonly("vocab", &EmbeddingSpace::vocab)
        .def_property_readonly("matrix", [](const EmbeddingSpace& s) { return s.matrix; })
        .def_readonly("length_normalized", &EmbeddingSpace::length_normalized)
        .def_readonly("mean_centered", &EmbeddingSpace::mean_centered)
        .def_property_readonly("n", &EmbeddingSpace::n)
        .def_property_readonly("d", &EmbeddingSpace::d)
        .def("__repr__", [](const EmbeddingSpace& s) {
            return "<EmbeddingSpace " + s.lang_id + " " + std::to_string(s.n()) + "x" +
                   std::to_string(s.d()) + ">";
        });

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("source_lang", &Spectrum::source_lang)
        .def_property_readonly("sigma", [](const Spectrum& s) { return s.sigma; })
        .def_property_readonly("d", &Spectrum::d)
        .def("__repr__", [](const Spectrum& s) {
            return "<Spectrum " + s.source_lang + " d=" + std::to_string(s.d()) + ">";
        });

    py::class_<PairScore>(m, "PairScore")
        .def_readonly("lang_a", &PairScore::lang_a)
        .def_readonly("lang_b", &PairScore::lang_b)
        .def_property_readonly("measure", [](const PairScore& s) { return measure_name(s.measure); })
        .def_readonly("value", &PairScore::value)
        .def_property_readonly("params", [](const PairScore& s) { return json_to_py(s.params); })
        .def("__repr__", [](const PairScore& s) {
            return "<PairScore " + s.lang_a + "," + s.lang_b + " " + measure_name(s.measure) + "=" +
                   format_g17(s.value) + ">";
        });

    py::class_<PairFailure>(m, "PairFailure")
        .def_readonly("lang_a", &PairFailure::lang_a)
        .def_readonly("lang_b", &PairFailure::lang_b)
        .def_property_readonly("measure", [](const PairFailure& f) { return measure_name(f.measure); })
        .def_readonly("reason", &PairFailure::reason);

    py::class_<PairwiseResult>(m, "PairwiseResult")
        .def_readonly("scores", &PairwiseResult::scores)
        .def_readonly("failures", &PairwiseResult::failures);

    py::class_<PerfRow>(m, "PerfRow")
        .def_readonly("source", &PerfRow::source)
        .def_readonly("target", &PerfRow::target)
        .def_readonly("task", &PerfRow::task)
        .def_readonly("score", &PerfRow::score)
        .def_readonly("phy", &PerfRow::phy)
        .def_readonly("typ", &PerfRow::typ)
        .def_readonly("geo", &PerfRow::geo);

    py::class_<PerformanceTable>(m, "PerformanceTable")
        .def_readonly("rows", &PerformanceTable::rows)
        .def_readonly("has_phy", &PerformanceTable::has_phy)
        .def_readonly("has_typ", &PerformanceTable::has_typ)
        .def_readonly("has_geo", &PerformanceTable::has_geo);

    py::class_<CorrelationEntry>(m, "CorrelationEntry")
        .def_readonly("label", &CorrelationEntry::label)
        .def_readonly("r", &CorrelationEntry::r)
        .def_readonly("n", &CorrelationEntry::n)
        .def_readonly("logged", &CorrelationEntry::logged)
        .def_readonly("points", &CorrelationEntry::points);

    py::class_<CorrelationTable>(m, "CorrelationTable")
        .def_readonly("entries", &CorrelationTable::entries)
        .def_readonly("skipped", &CorrelationTable::skipped)
        .def_readonly("unmatched_sample", &CorrelationTable::unmatched_sample)
        .def_readonly("unmatched_count", &CorrelationTable::unmatched_count)
        .def_readonly("joined_rows", &CorrelationTable::joined_rows);

    py::class_<RegressionReport>(m, "RegressionReport")
        .def_readonly("selected", &RegressionReport::selected)
        .def_readonly("beta", &RegressionReport::beta)
        .def_readonly("p_values", &RegressionReport::p_values)
        .def_readonly("r_squared", &RegressionReport::r_squared)
        .def_readonly("r_hat", &RegressionReport::r_hat)
        .def_readonly("n_obs", &RegressionReport::n_obs);

    py::class_<GroupResult>(m, "GroupResult")
        .def_readonly("group_lang", &GroupResult::group_lang)
        .def_readonly("n_rows", &GroupResult::n_rows)
        .def_readonly("r", &GroupResult::r);

    py::class_<SelectionReport>(m, "SelectionReport")
        .def_property_readonly("mode", [](const SelectionReport& r) { return selection_mode_name(r.mode); })
        .def_readonly("groups", &SelectionReport::groups)
        .def_readonly("skipped", &SelectionReport::skipped)
        .def_readonly("mean_r", &SelectionReport::mean_r)
        .def_readonly("win_pct", &SelectionReport::win_pct)
        .def_readonly("best_measure", &SelectionReport::best_measure)
        .def_readonly("multi_regressors", &SelectionReport::multi_regressors)
        .def_readonly("multi_r_hat", &SelectionReport::multi_r_hat)
        .def_readonly("multi_ok", &SelectionReport::multi_ok)
        .def_readonly("multi_note", &SelectionReport::multi_note);

    m.def(
        "load",
        [](const std::string& path, std::optional<std::size_t> limit, std::optional<int> expect_dim) {
            return load_embeddings(path, limit.value_or(kNoLimit), expect_dim);
        },
        py::arg("path"), py::arg("limit") = py::none(), py::arg("expect_dim") = py::none(),
        py::call_guard<py::gil_scoped_release>(),
        "Read a word2vec text file (optionally gzipped) into an EmbeddingSpace.");

    m.def("space_from_matrix", &space_from_matrix, py::arg("lang"), py::arg("matrix"),
          py::arg("vocab") = py::none(), py::arg("normalized") = false, py::arg("centered") = false,
          "Wrap a numpy matrix as an EmbeddingSpace; rows are words.");

    m.def(
        "length_normalize", [](EmbeddingSpace s) { return length_normalize(std::move(s)); }, py::arg("space"),
        "Scale every row to unit Euclidean length.");
    m.def(
        "mean_center", [](EmbeddingSpace s) { return mean_center(std::move(s)); }, py::arg("space"),
        "Subtract the column means.");
    m.def(
        "preprocess",
        [](EmbeddingSpace s, bool normalize, bool center) {
            return preprocess(std::move(s), normalize, center);
        },
        py::arg("space"), py::arg("normalize") = true, py::arg("center") = true,
        "Length-normalize then mean-center, the canonical preparation order.");

    m.def("singular_values", &singular_values, py::arg("space"),
          py::call_guard<py::gil_scoped_release>(),
          "Descending singular values of the space's matrix.");
    m.def(
        "spectrum_stats",
        [](const Spectrum& spec) {
            SpectrumStats st = spectrum_stats(spec);
            py::dict out;
            out["entropy"] = st.entropy;
            out["erank"] = st.erank;
            out["kappa"] = st.kappa;
            out["kappa_ecn"] = st.kappa_ecn;
            return out;
        },
        py::arg("spectrum"),
        "Entropy, effective rank, condition number and effective condition number.");

    m.def(
        "svg",
        [](const Spectrum& a, const Spectrum& b, std::optional<int> top_k) { return svg(a, b, top_k); },
        py::arg("a"), py::arg("b"), py::arg("top_k") = py::none(),
        "Squared gap between the log spectra; top_k=None compares whole spectra.");
    m.def(
        "cond_hm",
        [](const Spectrum& a, const Spectrum& b, const std::string& combiner) {
            return cond_hm(a, b, combiner_from_name(combiner));
        },
        py::arg("a"), py::arg("b"), py::arg("combiner") = "hm",
        "Harmonic mean (or min/max) of the two condition numbers.");
    m.def(
        "econd_hm",
        [](const Spectrum& a, const Spectrum& b, const std::string& combiner) {
            return econd_hm(a, b, combiner_from_name(combiner));
        },
        py::arg("a"), py::arg("b"), py::arg("combiner") = "hm",
        "Harmonic mean (or min/max) of the two effective condition numbers.");
    m.def("isospectrality", &isospectrality, py::arg("a"), py::arg("b"), py::arg("top_n") = 10000,
          py::arg("k") = 10, py::arg("mass") = 0.9, py::call_guard<py::gil_scoped_release>(),
          "Squared gap between nearest-neighbor-graph Laplacian spectra.");
    m.def("gromov_hausdorff", &gromov_hausdorff, py::arg("a"), py::arg("b"), py::arg("sample_n") = 5000,
          py::call_guard<py::gil_scoped_release>(),
          "Bottleneck distance between the sampled spaces' persistence diagrams.");

    m.def(
        "pairwise",
        [](const std::vector<EmbeddingSpace>& spaces, std::optional<std::vector<std::string>> measures,
           std::optional<int> svg_top_k, const std::string& combiner, int is_top_n, int is_k,
           double is_mass, int gh_sample, unsigned workers) {
            PairwiseOptions opts;
            if (measures) {
                opts.measures.clear();
                for (const std::string& name : *measures) opts.measures.insert(measure_from_name(name));
            }
            opts.svg_top_k = svg_top_k;
            opts.combiner = combiner_from_name(combiner);
            opts.is_top_n = is_top_n;
            opts.is_k = is_k;
            opts.is_mass = is_mass;
            opts.gh_sample = gh_sample;
            opts.workers = workers;
            py::gil_scoped_release release;
            return pairwise_matrix(spaces, opts);
        },
        py::arg("spaces"), py::arg("measures") = py::none(), py::arg("svg_top_k") = py::none(),
        py::arg("combiner") = "hm", py::arg("is_top_n") = 10000, py::arg("is_k") = 10,
        py::arg("is_mass") = 0.9, py::arg("gh_sample") = 5000, py::arg("workers") = 0,
        "All requested measures over all unordered pairs; failures are per cell.");

    m.def("load_pair_scores", &load_pair_scores_csv, py::arg("path"),
          "Read a pair-score CSV as written by the distance command.");
    m.def("load_performance", &load_performance_csv, py::arg("path"),
          "Read a task-performance CSV (source,target,task,score[,phy,typ,geo]).");

    m.def("correlate_measures", &correlate_measures, py::arg("pairs"), py::arg("perf"),
          py::arg("task") = "",
          "Per-measure Pearson correlation between log values and log task scores.");
    m.def("uriel_correlations", &uriel_correlations, py::arg("perf"), py::arg("task") = "",
          "Correlations of the raw linguistic distance columns against log scores.");

    m.def("pearson", &pearson, py::arg("x"), py::arg("y"), "Sample Pearson correlation.");
    m.def("ols", &ols, py::arg("design"), py::arg("y"), py::arg("names"),
          "Least squares on a design matrix whose first column is the intercept.");
    m.def(
        "stepwise_regression",
        [](const std::vector<std::pair<std::string, std::vector<double>>>& candidates,
           const std::vector<double>& y, double alpha) {
            std::vector<NamedColumn> cols;
            cols.reserve(candidates.size());
            for (const auto& [name, values] : candidates) cols.push_back({name, values});
            return stepwise_regression(cols, y, alpha);
        },
        py::arg("candidates"), py::arg("y"), py::arg("alpha") = 0.01,
        "Forward selection over (name, values) candidate columns.");

    m.def(
        "selection_analysis",
        [](const std::vector<PairScore>& pairs, const PerformanceTable& perf, const std::string& mode,
           const std::string& task, int min_group) {
            return selection_analysis(pairs, perf, selection_mode_from_name(mode), task, min_group);
        },
        py::arg("pairs"), py::arg("perf"), py::arg("mode") = "source", py::arg("task") = "",
        py::arg("min_group") = 3,
        "Per-fixed-language ranking study over the joined pair scores.");
}
