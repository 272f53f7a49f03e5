#pragma once

#include "isoglot/embedding.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <string>

namespace isoglot {

// The singular spectrum of one embedding matrix: sigma_1 >= ... >= sigma_d >= 0.
struct Spectrum {
    std::string source_lang;
    Eigen::VectorXd sigma;

    Eigen::Index d() const { return sigma.size(); }

    // sigma_i / sum(sigma), the distribution the entropy is taken over.
    Eigen::VectorXd normalized() const;
};

struct SpectrumStats {
    double entropy = 0.0;
    int erank = 1;
    double kappa = 1.0;
    double kappa_ecn = 1.0;
};

// Relative floor under which the smallest singular value makes the matrix
// count as singular for condition-number purposes.
inline constexpr double kSingularFloor = 1e-12;

// Singular values of the space's matrix, descending. Computed through the
// d x d Gram matrix X^T X: eigenvalues are the squared singular values, and
// round-off negatives are clamped to zero before the square root. Warns on
// stderr when the space is not mean-centered, since the downstream statistics
// assume centered input.
Spectrum singular_values(const EmbeddingSpace& space);

// Entropy (nats) of the normalized spectrum, with 0 ln 0 = 0.
double entropy(const Spectrum& spec);

// floor(exp(entropy)), clamped to [1, d].
int effective_rank(const Spectrum& spec);

// Number of singular values >= eps.
int eps_numerical_rank(const Spectrum& spec, double eps);

// Number of singular values above the standard numerical-rank tolerance
// d * machine_epsilon * sigma_1.
int numerical_rank(const Spectrum& spec);

// sigma_1 / sigma_d. Errors when sigma_d is at or below kSingularFloor * sigma_1.
double condition_number(const Spectrum& spec);

// sigma_1 / sigma_erank.
double effective_condition_number(const Spectrum& spec);

SpectrumStats spectrum_stats(const Spectrum& spec);

// JSON form {"lang": ..., "d": ..., "sigma": [...]}; doubles survive the
// round-trip bit-exactly.
nlohmann::ordered_json spectrum_to_json(const Spectrum& spec);
Spectrum spectrum_from_json(const nlohmann::json& j);

// One-line CSV form "lang,d,sigma_1,...,sigma_d" with 17-significant-digit
// values, also a bit-exact round-trip.
std::string spectrum_to_csv_line(const Spectrum& spec);
Spectrum spectrum_from_csv_line(const std::string& line);

} // namespace isoglot
