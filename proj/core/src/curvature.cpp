#include "sgr/curvature.hpp"

#include <cmath>

#include "sgr/error.hpp"
#include "sgr/spectral.hpp"

namespace sgr {

namespace {

constexpr double kTinyLink = 1e-9;
constexpr double kTol = 1e-9;

CurvatureReport report_from_links(const Graph& g, const Matrix& link) {
    const auto deg = degrees(g);
    CurvatureReport out;
    out.node_p.assign(g.n, 1.0);
    for (std::size_t u = 0; u < g.n; ++u)
        for (std::size_t w = 0; w < g.n; ++w)
            if (g.adjacency(u, w) > 0.0) out.node_p[u] -= 0.5 * link(u, w);

    out.all_bounds_hold = true;
    for (const Edge& e : edge_list(g)) {
        EdgeCurvature ec;
        ec.u = e.u;
        ec.v = e.v;
        ec.link_value = link(e.u, e.v);
        ec.lower = 4.0 - deg[e.u] - deg[e.v];
        if (ec.link_value < kTinyLink) {
            ec.unbounded = true;
            ++out.unbounded_edges;
            out.edges.push_back(ec);
            continue;
        }
        ec.kappa = 2.0 * (out.node_p[e.u] + out.node_p[e.v]) / ec.link_value;
        ec.upper = 2.0 / ec.link_value;
        ec.lower_holds = ec.kappa >= ec.lower - kTol;
        ec.upper_holds = ec.kappa <= ec.upper + kTol;
        ec.forman_holds = ec.lower / ec.link_value <= ec.kappa + kTol;
        out.all_bounds_hold =
            out.all_bounds_hold && ec.lower_holds && ec.upper_holds && ec.forman_holds;
        out.edges.push_back(ec);
    }
    return out;
}

}  // namespace

std::vector<double> node_curvature(const Graph& g) {
    return report_from_links(g, resistance_matrix(g).resistance).node_p;
}

std::vector<EdgeCurvature> edge_curvature(const Graph& g) {
    return report_from_links(g, resistance_matrix(g).resistance).edges;
}

CurvatureReport curvature_bounds_check(const Graph& g) {
    return report_from_links(g, resistance_matrix(g).resistance);
}

CurvatureReport curvature_on_diffusion(const Graph& g, const Matrix& t) {
    require(t.rows() == g.n && t.cols() == g.n, "curvature_on_diffusion: shape mismatch");
    for (std::size_t u = 0; u < g.n; ++u)
        for (std::size_t v = 0; v < g.n; ++v)
            require(!(t(u, v) > 0.0 && g.adjacency(u, v) == 0.0),
                    "curvature_on_diffusion: t has weight off A's support at (", u, ",", v, ")");
    return report_from_links(g, t);
}

}  // namespace sgr
