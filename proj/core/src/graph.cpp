#include "sgr/graph.hpp"

#include <algorithm>
#include <cmath>

#include "sgr/error.hpp"

namespace sgr {

Graph build_graph(std::size_t n, const std::vector<Edge>& edges) {
    require(n > 0, "build_graph: empty graph");
    Graph g;
    g.n = n;
    g.adjacency = Matrix(n, n);
    for (const Edge& e : edges) {
        require(e.u < n && e.v < n, "build_graph: edge (", e.u, ",", e.v, ") out of range for n=", n);
        require(e.u != e.v, "build_graph: self-loop at node ", e.u);
        require(e.w >= 0.0, "build_graph: negative weight ", e.w, " on edge (", e.u, ",", e.v, ")");
        require(g.adjacency(e.u, e.v) == 0.0, "build_graph: duplicate edge (", e.u, ",", e.v, ")");
        g.adjacency(e.u, e.v) = e.w;
        g.adjacency(e.v, e.u) = e.w;
    }
    return g;
}

std::vector<Edge> edge_list(const Graph& g) {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < g.n; ++u)
        for (std::size_t v = u + 1; v < g.n; ++v)
            if (g.adjacency(u, v) > 0.0) out.push_back({u, v, g.adjacency(u, v)});
    return out;
}

std::size_t edge_count(const Graph& g) { return edge_list(g).size(); }

std::vector<double> degrees(const Graph& g) {
    std::vector<double> d(g.n, 0.0);
    for (std::size_t u = 0; u < g.n; ++u)
        for (std::size_t v = 0; v < g.n; ++v) d[u] += g.adjacency(u, v);
    return d;
}

double volume(const Graph& g) {
    double vol = 0.0;
    for (double d : degrees(g)) vol += d;
    return vol;
}

double min_degree(const Graph& g) {
    auto d = degrees(g);
    return *std::min_element(d.begin(), d.end());
}

Matrix degree_matrix(const Graph& g) {
    Matrix m(g.n, g.n);
    auto d = degrees(g);
    for (std::size_t i = 0; i < g.n; ++i) m(i, i) = d[i];
    return m;
}

Matrix laplacian(const Graph& g) {
    Matrix l = degree_matrix(g);
    l -= g.adjacency;
    return l;
}

Matrix normalized_laplacian(const Graph& g) {
    auto d = degrees(g);
    for (std::size_t i = 0; i < g.n; ++i)
        require(d[i] > 0.0, "normalized_laplacian: isolated node ", i);
    Matrix nl(g.n, g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        nl(i, i) = 1.0;
        for (std::size_t j = 0; j < g.n; ++j)
            if (g.adjacency(i, j) > 0.0)
                nl(i, j) -= g.adjacency(i, j) / std::sqrt(d[i] * d[j]);
    }
    return nl;
}

Matrix incidence(const Graph& g) {
    auto edges = edge_list(g);
    Matrix b(edges.size(), g.n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const double s = std::sqrt(edges[e].w);
        b(e, edges[e].u) = s;
        b(e, edges[e].v) = -s;
    }
    return b;
}

bool is_connected(const Graph& g) {
    if (g.n == 0) return false;
    std::vector<char> seen(g.n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < g.n; ++v) {
            if (g.adjacency(u, v) > 0.0 && !seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == g.n;
}

Graph with_degree_features(const Graph& g) {
    if (g.features) return g;
    Graph out = g;
    auto d = degrees(g);
    double dmax = *std::max_element(d.begin(), d.end());
    if (dmax <= 0.0) dmax = 1.0;
    Matrix f(g.n, 1);
    for (std::size_t i = 0; i < g.n; ++i) f(i, 0) = d[i] / dmax;
    out.features = f;
    return out;
}

}  // namespace sgr
