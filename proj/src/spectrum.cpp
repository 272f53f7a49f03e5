#include "isoglot/spectrum.hpp"
#include "isoglot/common.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace isoglot {

Eigen::VectorXd Spectrum::normalized() const {
    double total = sigma.sum();
    if (total <= 0.0) throw compute_error("spectrum of \"" + source_lang + "\" is all zero");
    return sigma / total;
}

Spectrum singular_values(const EmbeddingSpace& space) {
    if (space.matrix.size() == 0) throw std::invalid_argument("singular_values: empty matrix");
    if (!space.matrix.allFinite())
        throw compute_error("singular_values: non-finite entries in space \"" + space.lang_id + "\"");
    if (!space.mean_centered)
        std::clog << "warning: computing singular values of \"" << space.lang_id
                  << "\" without mean centering\n";

    // n >> d makes the Gram route much cheaper than a full SVD of X itself.
    const Eigen::MatrixXd gram = space.matrix.transpose() * space.matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw compute_error("singular_values: eigen decomposition failed for \"" + space.lang_id + "\"");

    const Eigen::VectorXd ev = solver.eigenvalues(); // ascending
    Spectrum spec;
    spec.source_lang = space.lang_id;
    spec.sigma.resize(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        spec.sigma(i) = std::sqrt(std::max(0.0, ev(ev.size() - 1 - i)));
    return spec;
}

double entropy(const Spectrum& spec) {
    const Eigen::VectorXd p = spec.normalized();
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) h -= p(i) * std::log(p(i));
    return h;
}

int effective_rank(const Spectrum& spec) {
    int er = static_cast<int>(std::floor(std::exp(entropy(spec))));
    er = std::max(1, er);
    er = std::min(er, static_cast<int>(spec.d()));
    return er;
}

int eps_numerical_rank(const Spectrum& spec, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("eps_numerical_rank: eps must be positive");
    int count = 0;
    for (Eigen::Index i = 0; i < spec.sigma.size(); ++i)
        if (spec.sigma(i) >= eps) ++count;
    return count;
}

int numerical_rank(const Spectrum& spec) {
    if (spec.sigma.size() == 0) return 0;
    double tol = static_cast<double>(spec.d()) * std::numeric_limits<double>::epsilon() * spec.sigma(0);
    int count = 0;
    for (Eigen::Index i = 0; i < spec.sigma.size(); ++i)
        if (spec.sigma(i) > tol) ++count;
    return count;
}

double condition_number(const Spectrum& spec) {
    if (spec.sigma.size() == 0) throw std::invalid_argument("condition_number: empty spectrum");
    double s1 = spec.sigma(0);
    double sd = spec.sigma(spec.sigma.size() - 1);
    if (s1 <= 0.0 || sd <= kSingularFloor * s1)
        throw compute_error("condition_number: matrix of \"" + spec.source_lang +
                            "\" is numerically singular (sigma_d = " + format_g17(sd) + ")");
    return s1 / sd;
}

double effective_condition_number(const Spectrum& spec) {
    if (spec.sigma.size() == 0) throw std::invalid_argument("effective_condition_number: empty spectrum");
    double s1 = spec.sigma(0);
    double sd = spec.sigma(spec.sigma.size() - 1);
    if (s1 <= 0.0 || sd <= kSingularFloor * s1)
        throw compute_error("effective_condition_number: matrix of \"" + spec.source_lang +
                            "\" is numerically singular (sigma_d = " + format_g17(sd) + ")");
    int er = effective_rank(spec);
    return s1 / spec.sigma(er - 1);
}

SpectrumStats spectrum_stats(const Spectrum& spec) {
    SpectrumStats st;
    st.entropy = entropy(spec);
    st.erank = effective_rank(spec);
    st.kappa = condition_number(spec);
    st.kappa_ecn = effective_condition_number(spec);
    return st;
}

nlohmann::ordered_json spectrum_to_json(const Spectrum& spec) {
    nlohmann::ordered_json j;
    j["lang"] = spec.source_lang;
    j["d"] = spec.d();
    j["sigma"] = std::vector<double>(spec.sigma.data(), spec.sigma.data() + spec.sigma.size());
    return j;
}

Spectrum spectrum_from_json(const nlohmann::json& j) {
    Spectrum spec;
    spec.source_lang = j.at("lang").get<std::string>();
    auto values = j.at("sigma").get<std::vector<double>>();
    if (j.at("d").get<std::size_t>() != values.size())
        throw io_error("spectrum JSON: d does not match sigma length");
    spec.sigma = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return spec;
}

std::string spectrum_to_csv_line(const Spectrum& spec) {
    std::ostringstream out;
    out << spec.source_lang << ',' << spec.d();
    for (Eigen::Index i = 0; i < spec.sigma.size(); ++i) out << ',' << format_g17(spec.sigma(i));
    return out.str();
}

Spectrum spectrum_from_csv_line(const std::string& line) {
    std::istringstream in(line);
    std::string field;
    Spectrum spec;
    if (!std::getline(in, field, ',')) throw io_error("spectrum CSV: empty line");
    spec.source_lang = field;
    if (!std::getline(in, field, ',')) throw io_error("spectrum CSV: missing dimension field");
    long d = std::stol(field);
    if (d <= 0) throw io_error("spectrum CSV: nonpositive dimension");
    spec.sigma.resize(d);
    for (long i = 0; i < d; ++i) {
        if (!std::getline(in, field, ',')) throw io_error("spectrum CSV: expected " + std::to_string(d) + " values");
        spec.sigma(i) = std::stod(field);
    }
    return spec;
}

} // namespace isoglot
