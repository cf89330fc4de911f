#include "sgr/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgr/eig.hpp"
#include "sgr/error.hpp"
#include "sgr/generators.hpp"
#include "sgr/spectral.hpp"

namespace sgr {

ProjectedIncidence projected_incidence(const Graph& g) {
    const auto decomp = sym_eig(laplacian(g));
    const Matrix half = laplacian_pinv_sqrt(decomp);
    ProjectedIncidence out;
    out.edges = edge_list(g);
    out.v = Matrix(out.edges.size(), g.n);
    out.leverage.resize(out.edges.size());
    for (std::size_t e = 0; e < out.edges.size(); ++e) {
        const auto& edge = out.edges[e];
        const double s = std::sqrt(edge.w);
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double val = s * (half(i, edge.u) - half(i, edge.v));
            out.v(e, i) = val;
            norm_sq += val * val;
        }
        out.leverage[e] = norm_sq;
    }
    return out;
}

namespace {

void check_eps(double eps, std::size_t n) {
    const double lo = 1.0 / std::sqrt(static_cast<double>(n));
    require(eps > lo && eps <= 1.0, "sparsify: eps must be in (1/sqrt(n), 1] = (", lo,
            ", 1], got ", eps);
}

}  // namespace

SparsifyResult greedy_sparsify(const Graph& g, double eps) {
    require(is_connected(g), "greedy_sparsify: disconnected graph");
    check_eps(eps, g.n);
    const ProjectedIncidence pi = projected_incidence(g);
    const ResistanceMatrix rm = resistance_matrix(g);

    std::vector<std::size_t> order(pi.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ra = rm.resistance(pi.edges[a].u, pi.edges[a].v);
        const double rb = rm.resistance(pi.edges[b].u, pi.edges[b].v);
        return ra > rb;
    });

    SparsifyResult out;
    out.method = "greedy";
    out.eps = eps;
    out.gamma = eps < 1.0 ? (1.0 + eps) / (1.0 - eps)
                          : std::numeric_limits<double>::infinity();
    out.accumulator_ok = true;

    Matrix acc(g.n, g.n);
    const Matrix gamma_eye = std::isfinite(out.gamma) ? Matrix::identity(g.n) * out.gamma : Matrix();
    for (std::size_t idx : order) {
        const Edge& e = pi.edges[idx];
        Matrix candidate = acc;
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j) candidate(i, j) += pi.v(idx, i) * pi.v(idx, j);
        if (std::isfinite(out.gamma) && !psd_dominates(gamma_eye, candidate)) break;
        acc = std::move(candidate);
        out.kept.push_back(e);
        out.kept_r.push_back(rm.resistance(e.u, e.v));
    }
    out.sparsified = build_graph(g.n, out.kept);
    return out;
}

SparsifyResult sample_sparsify(const Graph& g, double eps, std::uint64_t seed) {
    require(is_connected(g), "sample_sparsify: disconnected graph");
    check_eps(eps, g.n);
    const ResistanceMatrix rm = resistance_matrix(g);
    const auto edges = edge_list(g);

    // q_e proportional to w_e R_e; the total is n - 1 by Foster's identity
    // but normalizing by the measured sum keeps the draw exact.
    std::vector<double> q(edges.size());
    double total = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        q[e] = edges[e].w * rm.resistance(edges[e].u, edges[e].v);
        total += q[e];
    }
    for (double& x : q) x /= total;

    const double n = static_cast<double>(g.n);
    const std::size_t draws = static_cast<std::size_t>(std::ceil(n * std::log(n) / (eps * eps)));

    std::vector<double> cumulative(q.size());
    std::partial_sum(q.begin(), q.end(), cumulative.begin());
    cumulative.back() = 1.0;

    Rng rng(seed);
    std::vector<double> weight(edges.size(), 0.0);
    for (std::size_t t = 0; t < draws; ++t) {
        const double u = rng.uniform();
        const std::size_t e =
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
        weight[e] += edges[e].w / (q[e] * static_cast<double>(draws));
    }

    SparsifyResult out;
    out.method = "sample";
    out.eps = eps;
    out.gamma = eps < 1.0 ? (1.0 + eps) / (1.0 - eps)
                          : std::numeric_limits<double>::infinity();
    out.accumulator_ok = true;
    out.draws = draws;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (weight[e] > 0.0) {
            out.kept.push_back({edges[e].u, edges[e].v, weight[e]});
            out.kept_r.push_back(rm.resistance(edges[e].u, edges[e].v));
        }
    }
    out.sparsified = build_graph(g.n, out.kept);
    return out;
}

SimilarityReport spectral_similarity_report(const Graph& g, const Graph& sparse, double eps,
                                            std::size_t probes, std::uint64_t seed) {
    require(g.n == sparse.n, "spectral_similarity_report: node counts differ");
    const Matrix l = laplacian(g);
    const Matrix ls = laplacian(sparse);
    const auto decomp = sym_eig(l);
    require(zero_eigenvalue_count(decomp) == 1, "spectral_similarity_report: disconnected graph");

    SimilarityReport out;
    out.eps = eps;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = -std::numeric_limits<double>::infinity();
    std::size_t in_range = 0;

    const auto push_probe = [&](const Matrix& x) {
        const double num = dot(x, matmul(ls, x));
        const double den = dot(x, matmul(l, x));
        const double ratio = num / den;
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
        if (ratio >= 1.0 - eps && ratio <= 1.0 + eps) ++in_range;
        ++out.probe_count;
    };

    for (std::size_t i = 1; i < g.n; ++i) {
        Matrix x(g.n, 1);
        for (std::size_t u = 0; u < g.n; ++u) x(u, 0) = decomp.eigenvectors(u, i);
        push_probe(x);
    }

    Rng rng(seed);
    for (std::size_t p = 0; p < probes; ++p) {
        Matrix x(g.n, 1);
        for (std::size_t u = 0; u < g.n; ++u) x(u, 0) = rng.uniform(-1.0, 1.0);
        double mean = 0.0;
        for (std::size_t u = 0; u < g.n; ++u) mean += x(u, 0);
        mean /= static_cast<double>(g.n);
        double norm = 0.0;
        for (std::size_t u = 0; u < g.n; ++u) {
            x(u, 0) -= mean;
            norm += x(u, 0) * x(u, 0);
        }
        if (norm < 1e-18) {
            --p;
            continue;
        }
        x *= 1.0 / std::sqrt(norm);
        push_probe(x);
    }
    out.fraction_in_range = static_cast<double>(in_range) / static_cast<double>(out.probe_count);
    return out;
}

}  // namespace sgr
