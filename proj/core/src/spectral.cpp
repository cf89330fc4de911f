#include "sgr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgr/error.hpp"

namespace sgr {

CTEmbedding spectral_cte(const Graph& g) {
    const auto d = sym_eig(laplacian(g));
    require(zero_eigenvalue_count(d) == 1, "spectral_cte: disconnected graph");
    const double vol = volume(g);
    const std::size_t n = g.n;
    CTEmbedding out;
    out.vol = vol;
    out.z = Matrix(n - 1, n);
    for (std::size_t i = 1; i < n; ++i) {
        const double scale = std::sqrt(vol) / std::sqrt(d.eigenvalues[i]);
        for (std::size_t u = 0; u < n; ++u) out.z(i - 1, u) = scale * d.eigenvectors(u, i);
    }
    return out;
}

ResistanceMatrix resistance_matrix(const Graph& g) {
    const Matrix lp = laplacian_pinv(laplacian(g));
    const double vol = volume(g);
    const std::size_t n = g.n;
    ResistanceMatrix out;
    out.vol = vol;
    out.resistance = Matrix(n, n);
    out.commute_time = Matrix(n, n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double r = lp(u, u) + lp(v, v) - 2.0 * lp(u, v);
            out.resistance(u, v) = r;
            out.resistance(v, u) = r;
            out.commute_time(u, v) = vol * r;
            out.commute_time(v, u) = vol * r;
        }
    }
    return out;
}

FiedlerPair fiedler_exact(const Graph& g, bool normalized) {
    const Matrix l = normalized ? normalized_laplacian(g) : laplacian(g);
    const auto d = sym_eig(l);
    require(zero_eigenvalue_count(d) == 1, "fiedler_exact: disconnected graph");
    FiedlerPair out;
    out.value = d.eigenvalues[1];
    out.vector.resize(g.n);
    for (std::size_t u = 0; u < g.n; ++u) out.vector[u] = d.eigenvectors(u, 1);
    return out;
}

BoundsReport bounds_report(const Graph& g) {
    BoundsReport out;
    out.gap_normalized = fiedler_exact(g, true).value;
    out.gap_unnormalized = fiedler_exact(g, false).value;
    out.used_normalized_gap = true;
    out.d_min = min_degree(g);

    const auto deg = degrees(g);
    const ResistanceMatrix rm = resistance_matrix(g);
    const double rhs_loose = (1.0 / out.gap_normalized) * (2.0 / out.d_min);
    const double rhs_refined = (1.0 / out.gap_normalized) * (2.0 / (out.d_min * out.d_min));
    const double tol = 1e-9;

    out.all_loose_hold = true;
    out.all_refined_hold = true;
    for (std::size_t u = 0; u < g.n; ++u) {
        for (std::size_t v = u + 1; v < g.n; ++v) {
            PairBound pb;
            pb.u = u;
            pb.v = v;
            pb.lhs = std::fabs(rm.resistance(u, v) - (1.0 / deg[u] + 1.0 / deg[v]));
            pb.rhs_loose = rhs_loose;
            pb.rhs_refined = rhs_refined;
            pb.holds_loose = pb.lhs <= rhs_loose + tol;
            pb.holds_refined = pb.lhs <= rhs_refined + tol;
            out.all_loose_hold = out.all_loose_hold && pb.holds_loose;
            out.all_refined_hold = out.all_refined_hold && pb.holds_refined;
            out.pairs.push_back(pb);
        }
    }
    return out;
}

namespace {

// Cut weight and volume of the subset encoded by mask bits.
double cut_weight(const Graph& g, const std::vector<char>& in_s) {
    double w = 0.0;
    for (std::size_t u = 0; u < g.n; ++u)
        for (std::size_t v = u + 1; v < g.n; ++v)
            if (in_s[u] != in_s[v]) w += g.adjacency(u, v);
    return w;
}

CheegerCut evaluate_cut(const Graph& g, const std::vector<char>& in_s,
                        const std::vector<double>& deg) {
    CheegerCut c;
    double vol_s = 0.0, vol_rest = 0.0;
    for (std::size_t u = 0; u < g.n; ++u) (in_s[u] ? vol_s : vol_rest) += deg[u];
    const double denom = std::min(vol_s, vol_rest);
    c.value = denom > 0.0 ? cut_weight(g, in_s) / denom : std::numeric_limits<double>::infinity();
    const bool keep_s = vol_s <= vol_rest;
    for (std::size_t u = 0; u < g.n; ++u)
        if (in_s[u] == (keep_s ? 1 : 0)) c.cut_side.push_back(u);
    return c;
}

}  // namespace

CheegerCut cheeger_exact(const Graph& g) {
    require(g.n <= 16, "cheeger_exact: n=", g.n, " too large, use cheeger_sweep");
    require(g.n >= 2, "cheeger_exact: need at least 2 nodes");
    const auto deg = degrees(g);
    CheegerCut best;
    best.value = std::numeric_limits<double>::infinity();
    // Node 0 is pinned to S; complements are covered by symmetry.
    const std::uint32_t combos = 1u << (g.n - 1);
    std::vector<char> in_s(g.n, 0);
    for (std::uint32_t bits = 0; bits + 1 < combos; ++bits) {
        in_s.assign(g.n, 0);
        in_s[0] = 1;
        for (std::size_t u = 1; u < g.n; ++u) in_s[u] = (bits >> (u - 1)) & 1u;
        CheegerCut c = evaluate_cut(g, in_s, deg);
        if (c.value < best.value) best = std::move(c);
    }
    best.method = "exact";
    return best;
}

CheegerCut cheeger_sweep(const Graph& g) {
    require(g.n >= 2, "cheeger_sweep: need at least 2 nodes");
    const FiedlerPair f = fiedler_exact(g, true);
    std::vector<std::size_t> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return f.vector[a] < f.vector[b]; });

    const auto deg = degrees(g);
    CheegerCut best;
    best.value = std::numeric_limits<double>::infinity();
    std::vector<char> in_s(g.n, 0);
    for (std::size_t k = 0; k + 1 < g.n; ++k) {
        in_s[order[k]] = 1;
        CheegerCut c = evaluate_cut(g, in_s, deg);
        if (c.value < best.value) best = std::move(c);
    }
    best.method = "sweep";
    return best;
}

ResistanceBoundReport resistance_bound_check(const Graph& g, double eps) {
    require(eps > 0.0 && eps <= 0.5, "resistance_bound_check: eps must be in (0, 1/2], got ", eps);
    ResistanceBoundReport out;
    out.eps = eps;
    out.cheeger = g.n <= 16 ? cheeger_exact(g) : cheeger_sweep(g);

    const auto deg = degrees(g);
    double vol_s = 0.0;
    for (std::size_t u : out.cheeger.cut_side) vol_s += deg[u];
    out.c = out.cheeger.value * std::pow(vol_s, 0.5 - eps);

    const ResistanceMatrix rm = resistance_matrix(g);
    out.max_resistance = 0.0;
    for (std::size_t u = 0; u < g.n; ++u) {
        for (std::size_t v = u + 1; v < g.n; ++v) {
            if (rm.resistance(u, v) > out.max_resistance) {
                out.max_resistance = rm.resistance(u, v);
                out.argmax_u = u;
                out.argmax_v = v;
            }
        }
    }

    const double tol = 1e-9;
    const double h = out.cheeger.value;
    out.max_r_within_inv_h2 = out.max_resistance <= 1.0 / (h * h) + tol;

    out.violating_pairs = 0;
    const double c2eps = eps * out.c * out.c;
    for (std::size_t u = 0; u < g.n; ++u) {
        for (std::size_t v = u + 1; v < g.n; ++v) {
            const double cap =
                (1.0 / std::pow(deg[u], 2.0 * eps) + 1.0 / std::pow(deg[v], 2.0 * eps)) / c2eps;
            if (rm.resistance(u, v) > cap + tol) ++out.violating_pairs;
        }
    }
    out.all_pairs_hold = out.violating_pairs == 0;

    // Reverse direction: a large resistance diameter caps how big h can be.
    const double du = deg[out.argmax_u];
    const double dv = deg[out.argmax_v];
    const double c_star = std::sqrt(
        (1.0 / std::pow(du, 2.0 * eps) + 1.0 / std::pow(dv, 2.0 * eps)) / (eps * out.max_resistance));
    out.cheeger_upper = c_star / std::pow(min_degree(g), 0.5 - eps);
    out.cheeger_upper_holds = h <= out.cheeger_upper + tol;
    return out;
}

}  // namespace sgr
