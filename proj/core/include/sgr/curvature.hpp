#pragma once

#include <vector>

#include "sgr/graph.hpp"

namespace sgr {

struct EdgeCurvature {
    std::size_t u = 0, v = 0;
    double link_value = 0.0;  // R_uv, or the diffusion weight standing in for it
    double kappa = 0.0;       // 2 (p_u + p_v) / link_value
    double lower = 0.0;       // 4 - d_u - d_v
    double upper = 0.0;       // 2 / link_value
    bool lower_holds = false;
    bool upper_holds = false;
    bool forman_holds = false;  // (4 - d_u - d_v) / link_value <= kappa
    bool unbounded = false;     // link value below 1e-9, kappa unreliable
};

struct CurvatureReport {
    std::vector<double> node_p;  // p_u = 1 - (1/2) sum_{u~w} link(u,w)
    std::vector<EdgeCurvature> edges;
    bool all_bounds_hold = false;  // over non-unbounded edges
    std::size_t unbounded_edges = 0;
};

// Node curvatures p_u from effective resistances.
std::vector<double> node_curvature(const Graph& g);

// Edge curvatures kappa_uv from effective resistances.
std::vector<EdgeCurvature> edge_curvature(const Graph& g);

// Full report with the degree bounds checked on every edge.
CurvatureReport curvature_bounds_check(const Graph& g);

// Same formulas with the entries of a diffusion/rewired matrix t in place
// of the resistances; t must share A's support. Bounds are only meaningful
// when t encodes true resistances.
CurvatureReport curvature_on_diffusion(const Graph& g, const Matrix& t);

}  // namespace sgr
