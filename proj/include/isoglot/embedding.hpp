#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace isoglot {

// One embedding space: an n x d matrix with row i holding the vector of
// vocab[i]. Row order follows the input file, which for published fastText
// vectors is frequency order. Immutable by convention once built; the
// preprocessing functions below take the space by value and return it moved.
struct EmbeddingSpace {
    std::string lang_id;
    std::vector<std::string> vocab;
    Eigen::MatrixXd matrix;
    bool length_normalized = false;
    bool mean_centered = false;

    Eigen::Index n() const { return matrix.rows(); }
    Eigen::Index d() const { return matrix.cols(); }
};

struct LoadStats {
    std::size_t duplicates_dropped = 0;
    std::size_t lines_read = 0;
};

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

// Reads word2vec text format: a header line "n d", then n lines of
// "token v1 ... vd". Gzip input is accepted when the path ends in ".gz".
// Keeps the first min(n, limit) unique tokens in file order; later duplicates
// of a token are dropped (and counted in stats) while reading continues, so
// the limit refers to rows actually kept.
EmbeddingSpace load_embeddings(const std::string& path,
                               std::size_t limit = kNoLimit,
                               std::optional<int> expect_dim = std::nullopt,
                               LoadStats* stats = nullptr);

// Divides each row by its Euclidean norm. A zero-norm row is an error naming
// the offending token.
EmbeddingSpace length_normalize(EmbeddingSpace space);

// Subtracts the column means.
EmbeddingSpace mean_center(EmbeddingSpace space);

// The canonical preprocessing chain: length_normalize then mean_center,
// either step skippable.
EmbeddingSpace preprocess(EmbeddingSpace space, bool normalize = true, bool center = true);

// Derives a language tag from a file path: basename with .vec/.txt/.gz
// extensions stripped ("data/de.vec.gz" -> "de").
std::string lang_from_path(const std::string& path);

} // namespace isoglot
