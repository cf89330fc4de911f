#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgr/graph.hpp"

namespace sgr {

// Rows are the incidence vectors pushed through L^{+/2}; the squared norm
// of row e equals w_e * R_e, the edge's leverage (plain R_e when unweighted).
struct ProjectedIncidence {
    Matrix v;                      // m x n
    std::vector<Edge> edges;       // canonical order matching the rows
    std::vector<double> leverage;  // ||v_e||^2
};

ProjectedIncidence projected_incidence(const Graph& g);

struct SparsifyResult {
    Graph sparsified;
    std::vector<Edge> kept;      // greedy: in acceptance order
    std::vector<double> kept_r;  // resistances matching `kept`
    double eps = 0.0;
    double gamma = 0.0;  // (1 + eps) / (1 - eps); infinite at eps == 1
    bool accumulator_ok = false;
    std::string method;
    std::size_t draws = 0;  // sampling variant only
};

// Deterministic greedy pass: edges in descending resistance, each accepted
// while the accumulated projector stays below gamma * I; the first failure
// stops the scan. Kept edges stay at their original weight. eps must lie
// in (1/sqrt(n), 1].
SparsifyResult greedy_sparsify(const Graph& g, double eps);

// Importance sampling with replacement: ceil(n ln n / eps^2) draws with
// probability proportional to w_e * R_e; a drawn edge accumulates
// w_e / (q_e * draws), making the sparsified Laplacian unbiased.
SparsifyResult sample_sparsify(const Graph& g, double eps, std::uint64_t seed);

struct SimilarityReport {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double fraction_in_range = 0.0;  // within [1 - eps, 1 + eps]
    std::size_t probe_count = 0;
    double eps = 0.0;
};

// Quadratic-form ratios x^T L' x / x^T L x over the exact nontrivial
// eigenvectors of L plus `probes` random unit vectors orthogonal to ones.
SimilarityReport spectral_similarity_report(const Graph& g, const Graph& sparse, double eps,
                                            std::size_t probes, std::uint64_t seed);

}  // namespace sgr
