#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sgr/eig.hpp"
#include "sgr/graph.hpp"

namespace sgr {

// Commute-time embedding: column u is node u's coordinate vector,
// row i is sqrt(vol) * lambda_i^{-1/2} * f_i over the nonzero eigenpairs,
// so that ||z_u - z_v||^2 = vol * R_uv.
struct CTEmbedding {
    Matrix z;  // (n-1) x n
    double vol = 0.0;
};

struct ResistanceMatrix {
    Matrix resistance;    // effective resistances R_uv
    Matrix commute_time;  // vol * R
    double vol = 0.0;
};

struct FiedlerPair {
    double value = 0.0;
    std::vector<double> vector;
};

struct PairBound {
    std::size_t u = 0, v = 0;
    double lhs = 0.0;           // |R_uv - (1/d_u + 1/d_v)|
    double rhs_loose = 0.0;     // (1/gap) * 2/d_min
    double rhs_refined = 0.0;   // (1/gap) * 2/d_min^2
    bool holds_loose = false;
    bool holds_refined = false;
};

// Degree-proximity bounds on normalized commute times. The gap used on the
// right-hand side is the normalized-Laplacian spectral gap; the plain
// Laplacian gap is carried alongside for reference.
struct BoundsReport {
    double gap_normalized = 0.0;
    double gap_unnormalized = 0.0;
    bool used_normalized_gap = true;
    double d_min = 0.0;
    std::vector<PairBound> pairs;
    bool all_loose_hold = false;
    bool all_refined_hold = false;
};

struct CheegerCut {
    double value = 0.0;
    std::vector<std::size_t> cut_side;  // the smaller-volume side
    std::string method;                 // "exact" or "sweep"
};

// Resistance-diameter diagnostics: per-pair degree bound with the exponent
// eps, plus the Cheeger-based resistance cap and its reverse bound.
struct ResistanceBoundReport {
    double eps = 0.0;
    CheegerCut cheeger;
    double c = 0.0;  // h * vol(S)^{1/2 - eps} at the measured cut
    double max_resistance = 0.0;
    std::size_t argmax_u = 0, argmax_v = 0;
    bool max_r_within_inv_h2 = false;  // max R <= 1/h^2
    std::size_t violating_pairs = 0;   // pairs breaking the degree bound
    bool all_pairs_hold = false;
    double cheeger_upper = 0.0;  // upper bound on h from the resistance diameter
    bool cheeger_upper_holds = false;
};

// Spectral commute-time embedding of a connected graph.
CTEmbedding spectral_cte(const Graph& g);

// Effective resistances via the Laplacian pseudo-inverse quadratic form.
ResistanceMatrix resistance_matrix(const Graph& g);

// Second-smallest eigenpair of the (normalized) Laplacian.
FiedlerPair fiedler_exact(const Graph& g, bool normalized);

BoundsReport bounds_report(const Graph& g);

// Exact Cheeger constant by subset enumeration; only for n <= 16,
// larger graphs must use cheeger_sweep.
CheegerCut cheeger_exact(const Graph& g);

// Best of the n-1 sweep cuts in normalized Fiedler order; an upper bound
// on the exact constant.
CheegerCut cheeger_sweep(const Graph& g);

// eps must lie in (0, 1/2].
ResistanceBoundReport resistance_bound_check(const Graph& g, double eps);

}  // namespace sgr
