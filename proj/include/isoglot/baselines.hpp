#pragma once

#include "isoglot/embedding.hpp"
#include "isoglot/measures.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace isoglot {

// Undirected k-nearest-neighbor graph over the first top_n rows of a space.
struct NeighborGraph {
    int node_count = 0;
    int k = 0;
    std::vector<std::vector<int>> adj; // sorted, no self loops, symmetric

    std::size_t edge_count() const;
    std::vector<int> degrees() const;
};

// Eigenvalues of the unnormalized Laplacian L = D - A, descending, round-off
// negatives clamped to zero.
struct LaplacianSpectrum {
    Eigen::VectorXd eigenvalues;
};

// H0 persistence diagram: (birth, death) pairs with death >= birth >= 0.
// Diagrams produced by h0_persistence always have birth = 0.
struct PersistenceDiagram {
    std::vector<std::pair<double, double>> points;
};

// Connects each of the first top_n rows to its k nearest neighbors by cosine
// similarity (dot product on unit vectors), then symmetrizes as a union.
// Ties break toward the lower vocabulary index. Requires a length-normalized
// space, top_n in [2, n], and k in [1, top_n - 1].
NeighborGraph knn_graph(const EmbeddingSpace& space, int top_n, int k);

LaplacianSpectrum laplacian_spectrum(const NeighborGraph& graph);

// Smallest r such that the top r eigenvalues hold at least `mass` of the
// total spectral mass.
int mass_rank(const LaplacianSpectrum& spectrum, double mass);

// Sum of squared differences over the top k* eigenvalues, where k* is the
// smaller of the two mass ranks.
double isospectral_delta(const LaplacianSpectrum& a, const LaplacianSpectrum& b, double mass);

// The isospectrality measure: k-NN graphs over the top_n most frequent words,
// Laplacian spectra, then the squared gap over the 90%-mass prefix.
// Lower means more isomorphic.
PairScore isospectrality(const EmbeddingSpace& a, const EmbeddingSpace& b,
                         int top_n = 10000, int k = 10, double mass = 0.9);

// Euclidean distances over the first sample_n rows. Symmetric, zero diagonal.
Eigen::MatrixXd distance_matrix(const EmbeddingSpace& space, int sample_n);

// H0 persistence of the Vietoris-Rips filtration: one point (0, w) per
// minimum-spanning-tree edge weight w. The essential class is dropped.
PersistenceDiagram h0_persistence(const Eigen::MatrixXd& dist);

// Exact bottleneck distance between two diagrams: the smallest max-cost over
// partial matchings, where unmatched points pay (death - birth) / 2. Found by
// binary search over the candidate cost set with a bipartite feasibility
// check at each step.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

// The Gromov-Hausdorff proxy: bottleneck distance between the H0 persistence
// diagrams of the two spaces' sampled distance matrices.
PairScore gromov_hausdorff(const EmbeddingSpace& a, const EmbeddingSpace& b, int sample_n = 5000);

} // namespace isoglot
