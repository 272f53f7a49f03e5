#include "isoglot/baselines.hpp"
#include "isoglot/common.hpp"

#include <Eigen/Eigenvalues>

#ifdef ISOGLOT_HAVE_LAPACKE
#include <lapacke.h>
extern "C" void openblas_set_num_threads(int);
#endif

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

namespace isoglot {

std::size_t NeighborGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& nb : adj) total += nb.size();
    return total / 2;
}

std::vector<int> NeighborGraph::degrees() const {
    std::vector<int> deg(adj.size());
    for (std::size_t i = 0; i < adj.size(); ++i) deg[i] = static_cast<int>(adj[i].size());
    return deg;
}

NeighborGraph knn_graph(const EmbeddingSpace& space, int top_n, int k) {
    if (!space.length_normalized)
        throw std::invalid_argument("knn_graph: space \"" + space.lang_id + "\" must be length-normalized");
    if (top_n < 2) throw std::invalid_argument("knn_graph: top_n must be at least 2");
    if (top_n > space.n())
        throw std::invalid_argument("knn_graph: top_n = " + std::to_string(top_n) + " exceeds n = " +
                                    std::to_string(space.n()));
    if (k < 1 || k >= top_n)
        throw std::invalid_argument("knn_graph: k must be in [1, top_n - 1], got k = " + std::to_string(k));

    const auto block = space.matrix.topRows(top_n);
    const int m = top_n;

    // Similarities computed in column blocks to keep memory at O(m * B)
    // instead of O(m^2).
    constexpr int kBlock = 256;
    std::vector<std::pair<double, int>> order(static_cast<std::size_t>(m));
    std::set<std::pair<int, int>> edges;

    Eigen::MatrixXd sims;
    for (int start = 0; start < m; start += kBlock) {
        const int width = std::min(kBlock, m - start);
        sims.noalias() = block * block.middleRows(start, width).transpose(); // m x width

        for (int c = 0; c < width; ++c) {
            const int node = start + c;
            for (int r = 0; r < m; ++r) order[static_cast<std::size_t>(r)] = {sims(r, c), r};
            order[static_cast<std::size_t>(node)].first = -std::numeric_limits<double>::infinity();

            // Highest similarity first; equal similarities break toward the
            // lower vocabulary index.
            auto better = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            };
            std::partial_sort(order.begin(), order.begin() + k, order.end(), better);

            for (int t = 0; t < k; ++t) {
                int nb = order[static_cast<std::size_t>(t)].second;
                edges.insert({std::min(node, nb), std::max(node, nb)});
            }
        }
    }

    NeighborGraph graph;
    graph.node_count = m;
    graph.k = k;
    graph.adj.assign(static_cast<std::size_t>(m), {});
    for (const auto& [u, v] : edges) {
        graph.adj[static_cast<std::size_t>(u)].push_back(v);
        graph.adj[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nb : graph.adj) std::sort(nb.begin(), nb.end());
    return graph;
}

LaplacianSpectrum laplacian_spectrum(const NeighborGraph& graph) {
    const int n = graph.node_count;
    if (n <= 0) throw std::invalid_argument("laplacian_spectrum: empty graph");

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        lap(i, i) = static_cast<double>(graph.adj[static_cast<std::size_t>(i)].size());
        for (int j : graph.adj[static_cast<std::size_t>(i)]) lap(i, j) = -1.0;
    }

    Eigen::VectorXd ev;
#ifdef ISOGLOT_HAVE_LAPACKE
    // Large problems go through LAPACK's MRRR eigenvalues-only driver, which
    // is far faster than a full decomposition and needs only O(n) workspace.
    if (n > 2048) {
        static const int threads_pinned = [] {
            openblas_set_num_threads(1); // keep results independent of runtime thread count
            return 1;
        }();
        (void)threads_pinned;
        std::vector<double> w(static_cast<std::size_t>(n));
        std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
        lapack_int found = 0;
        lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'A', 'L', n, lap.data(), n, 0.0, 0.0, 0, 0,
                                         0.0, &found, w.data(), nullptr, 1, isuppz.data());
        if (info != 0)
            throw compute_error("laplacian_spectrum: LAPACK dsyevr failed with info = " + std::to_string(info));
        ev = Eigen::Map<Eigen::VectorXd>(w.data(), found);
    } else
#endif
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw compute_error("laplacian_spectrum: eigen decomposition failed");
        ev = solver.eigenvalues();
    }

    LaplacianSpectrum spec;
    spec.eigenvalues.resize(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        spec.eigenvalues(i) = std::max(0.0, ev(ev.size() - 1 - i));
    return spec;
}

int mass_rank(const LaplacianSpectrum& spectrum, double mass) {
    if (mass <= 0.0 || mass > 1.0)
        throw std::invalid_argument("mass_rank: mass must be in (0, 1], got " + format_g17(mass));
    const Eigen::Index n = spectrum.eigenvalues.size();
    if (n == 0) throw std::invalid_argument("mass_rank: empty spectrum");
    double total = spectrum.eigenvalues.sum();
    if (total <= 0.0)
        throw compute_error("mass_rank: all-zero Laplacian spectrum (edgeless graph)");

    double cum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        cum += spectrum.eigenvalues(i);
        if (cum >= mass * total) return static_cast<int>(i + 1);
    }
    return static_cast<int>(n);
}

double isospectral_delta(const LaplacianSpectrum& a, const LaplacianSpectrum& b, double mass) {
    int k = std::min(mass_rank(a, mass), mass_rank(b, mass));
    double delta = 0.0;
    for (int i = 0; i < k; ++i) {
        double gap = a.eigenvalues(i) - b.eigenvalues(i);
        delta += gap * gap;
    }
    return delta;
}

PairScore isospectrality(const EmbeddingSpace& a, const EmbeddingSpace& b, int top_n, int k, double mass) {
    LaplacianSpectrum la = laplacian_spectrum(knn_graph(a, top_n, k));
    LaplacianSpectrum lb = laplacian_spectrum(knn_graph(b, top_n, k));

    PairScore score;
    score.lang_a = a.lang_id;
    score.lang_b = b.lang_id;
    if (score.lang_b < score.lang_a) std::swap(score.lang_a, score.lang_b);
    score.measure = Measure::IS;
    score.value = isospectral_delta(la, lb, mass);
    score.params["is_top_n"] = top_n;
    score.params["is_k"] = k;
    score.params["is_mass"] = mass;
    return score;
}

Eigen::MatrixXd distance_matrix(const EmbeddingSpace& space, int sample_n) {
    if (!space.length_normalized)
        throw std::invalid_argument("distance_matrix: space \"" + space.lang_id + "\" must be length-normalized");
    if (sample_n < 2) throw std::invalid_argument("distance_matrix: sample_n must be at least 2");
    if (sample_n > space.n())
        throw std::invalid_argument("distance_matrix: sample_n = " + std::to_string(sample_n) +
                                    " exceeds n = " + std::to_string(space.n()));

    const auto block = space.matrix.topRows(sample_n);
    Eigen::MatrixXd dist(sample_n, sample_n);
    dist.diagonal().setZero();
    // Distances come from explicit row differences rather than the
    // 2 - 2 cos identity: the identity loses half the significant digits
    // near zero distance, and nearly identical rows do occur in real data.
    for (int i = 0; i < sample_n; ++i) {
        for (int j = i + 1; j < sample_n; ++j) {
            double d = (block.row(i) - block.row(j)).norm();
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }
    return dist;
}

PersistenceDiagram h0_persistence(const Eigen::MatrixXd& dist) {
    const Eigen::Index n = dist.rows();
    if (n != dist.cols()) throw std::invalid_argument("h0_persistence: distance matrix must be square");
    if (n < 1) throw std::invalid_argument("h0_persistence: empty distance matrix");

    PersistenceDiagram diagram;
    if (n == 1) return diagram;

    // Prim's algorithm on the dense matrix. Each MST edge weight is the death
    // time of one H0 class; the single essential class is dropped.
    std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(n - 1));

    int current = 0;
    in_tree[0] = true;
    for (Eigen::Index step = 1; step < n; ++step) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!in_tree[static_cast<std::size_t>(j)])
                best[static_cast<std::size_t>(j)] =
                    std::min(best[static_cast<std::size_t>(j)], dist(current, j));
        }
        int pick = -1;
        double pick_w = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!in_tree[static_cast<std::size_t>(j)] && best[static_cast<std::size_t>(j)] < pick_w) {
                pick_w = best[static_cast<std::size_t>(j)];
                pick = static_cast<int>(j);
            }
        }
        in_tree[static_cast<std::size_t>(pick)] = true;
        weights.push_back(pick_w);
        current = pick;
    }

    std::sort(weights.begin(), weights.end());
    for (double w : weights) diagram.points.emplace_back(0.0, w);
    return diagram;
}

namespace {

double linf_cost(const std::pair<double, double>& p, const std::pair<double, double>& q) {
    return std::max(std::abs(p.first - q.first), std::abs(p.second - q.second));
}

double diag_cost(const std::pair<double, double>& p) { return (p.second - p.first) / 2.0; }

// Maximum bipartite matching via Hopcroft-Karp over an explicit adjacency.
class HopcroftKarp {
public:
    HopcroftKarp(int left, int right) : nl_(left), nr_(right), adj_(static_cast<std::size_t>(left)) {}

    void add_edge(int l, int r) { adj_[static_cast<std::size_t>(l)].push_back(r); }

    int max_matching() {
        match_l_.assign(static_cast<std::size_t>(nl_), -1);
        match_r_.assign(static_cast<std::size_t>(nr_), -1);
        int matched = 0;
        for (;;) {
            if (!bfs()) break;
            for (int l = 0; l < nl_; ++l)
                if (match_l_[static_cast<std::size_t>(l)] < 0 && dfs(l)) ++matched;
        }
        return matched;
    }

private:
    bool bfs() {
        std::vector<int> queue;
        dist_.assign(static_cast<std::size_t>(nl_), -1);
        for (int l = 0; l < nl_; ++l)
            if (match_l_[static_cast<std::size_t>(l)] < 0) {
                dist_[static_cast<std::size_t>(l)] = 0;
                queue.push_back(l);
            }
        bool reachable = false;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int l = queue[qi];
            for (int r : adj_[static_cast<std::size_t>(l)]) {
                int l2 = match_r_[static_cast<std::size_t>(r)];
                if (l2 < 0) {
                    reachable = true;
                } else if (dist_[static_cast<std::size_t>(l2)] < 0) {
                    dist_[static_cast<std::size_t>(l2)] = dist_[static_cast<std::size_t>(l)] + 1;
                    queue.push_back(l2);
                }
            }
        }
        return reachable;
    }

    bool dfs(int l) {
        for (int r : adj_[static_cast<std::size_t>(l)]) {
            int l2 = match_r_[static_cast<std::size_t>(r)];
            if (l2 < 0 || (dist_[static_cast<std::size_t>(l2)] == dist_[static_cast<std::size_t>(l)] + 1 && dfs(l2))) {
                match_l_[static_cast<std::size_t>(l)] = r;
                match_r_[static_cast<std::size_t>(r)] = l;
                return true;
            }
        }
        dist_[static_cast<std::size_t>(l)] = -2;
        return false;
    }

    int nl_, nr_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_l_, match_r_, dist_;
};

bool all_births_zero(const std::vector<std::pair<double, double>>& pts) {
    for (const auto& p : pts)
        if (p.first != 0.0) return false;
    return true;
}

// Does a matching exist that covers every `must` point with a partner from
// `pool` at L-inf cost <= c?
bool saturates(const std::vector<std::pair<double, double>>& must,
               const std::vector<std::pair<double, double>>& pool, double c, bool births_zero) {
    if (must.empty()) return true;
    if (must.size() > pool.size()) return false;

    if (births_zero) {
        // One-dimensional case: sort by death and greedily take the smallest
        // compatible partner. Standard exchange argument shows this is optimal.
        std::vector<double> m_deaths;
        m_deaths.reserve(must.size());
        for (const auto& p : must) m_deaths.push_back(p.second);
        std::sort(m_deaths.begin(), m_deaths.end());

        std::multiset<double> pool_set;
        for (const auto& p : pool) pool_set.insert(p.second);
        for (double death : m_deaths) {
            auto it = pool_set.lower_bound(death - c);
            if (it == pool_set.end() || *it > death + c) return false;
            pool_set.erase(it);
        }
        return true;
    }

    HopcroftKarp hk(static_cast<int>(must.size()), static_cast<int>(pool.size()));
    for (std::size_t i = 0; i < must.size(); ++i)
        for (std::size_t j = 0; j < pool.size(); ++j)
            if (linf_cost(must[i], pool[j]) <= c) hk.add_edge(static_cast<int>(i), static_cast<int>(j));
    return hk.max_matching() == static_cast<int>(must.size());
}

// Feasibility of bottleneck cost c. Points whose diagonal cost exceeds c must
// be matched across; the rest may retire to the diagonal. By the
// Mendelsohn-Dulmage theorem, a matching covering both "must" sets exists iff
// each side can be covered separately.
bool feasible(const std::vector<std::pair<double, double>>& a, const std::vector<std::pair<double, double>>& b,
              double c, bool births_zero) {
    std::vector<std::pair<double, double>> a_must, b_must;
    for (const auto& p : a)
        if (diag_cost(p) > c) a_must.push_back(p);
    for (const auto& p : b)
        if (diag_cost(p) > c) b_must.push_back(p);
    return saturates(a_must, b, c, births_zero) && saturates(b_must, a, c, births_zero);
}

} // namespace

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    for (const auto& p : a.points)
        if (!(p.second >= p.first) || !(p.first >= 0.0) || !std::isfinite(p.second))
            throw std::invalid_argument("bottleneck_distance: invalid diagram point");
    for (const auto& p : b.points)
        if (!(p.second >= p.first) || !(p.first >= 0.0) || !std::isfinite(p.second))
            throw std::invalid_argument("bottleneck_distance: invalid diagram point");

    if (a.points.empty() && b.points.empty()) return 0.0;

    const bool births_zero = all_births_zero(a.points) && all_births_zero(b.points);

    // Candidate optimal costs: every cross-pair L-inf cost and every diagonal
    // cost. The optimum is always attained at one of these.
    std::vector<double> candidates;
    candidates.reserve(a.points.size() * b.points.size() + a.points.size() + b.points.size() + 1);
    candidates.push_back(0.0);
    for (const auto& p : a.points) candidates.push_back(diag_cost(p));
    for (const auto& q : b.points) candidates.push_back(diag_cost(q));
    for (const auto& p : a.points)
        for (const auto& q : b.points) candidates.push_back(linf_cost(p, q));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t lo = 0, hi = candidates.size() - 1;
    if (!feasible(a.points, b.points, candidates[hi], births_zero))
        throw compute_error("bottleneck_distance: no feasible matching at the maximal candidate cost");
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(a.points, b.points, candidates[mid], births_zero)) hi = mid;
        else lo = mid + 1;
    }
    return candidates[lo];
}

PairScore gromov_hausdorff(const EmbeddingSpace& a, const EmbeddingSpace& b, int sample_n) {
    PersistenceDiagram da = h0_persistence(distance_matrix(a, sample_n));
    PersistenceDiagram db = h0_persistence(distance_matrix(b, sample_n));

    PairScore score;
    score.lang_a = a.lang_id;
    score.lang_b = b.lang_id;
    if (score.lang_b < score.lang_a) std::swap(score.lang_a, score.lang_b);
    score.measure = Measure::GH;
    score.value = bottleneck_distance(da, db);
    score.params["gh_sample"] = sample_n;
    return score;
}

} // namespace isoglot
