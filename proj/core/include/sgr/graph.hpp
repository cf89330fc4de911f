#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgr/matrix.hpp"

namespace sgr {

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    double w = 1.0;
};

// Undirected weighted graph stored as a dense symmetric adjacency matrix
// with zero diagonal. Node features and a class label are optional so the
// same type flows through generators, IO and training.
struct Graph {
    std::size_t n = 0;
    Matrix adjacency;                 // n x n, symmetric, zero diagonal
    std::optional<Matrix> features;   // n x F
    std::optional<int> label;

    bool has_edge(std::size_t u, std::size_t v) const { return adjacency(u, v) > 0.0; }
};

// Builds a graph from an edge list. Rejects self-loops, duplicate edges,
// negative weights and out-of-range endpoints; messages name the offender.
Graph build_graph(std::size_t n, const std::vector<Edge>& edges);

// Canonical edge listing: u < v, sorted lexicographically.
std::vector<Edge> edge_list(const Graph& g);
std::size_t edge_count(const Graph& g);

std::vector<double> degrees(const Graph& g);
double volume(const Graph& g);
double min_degree(const Graph& g);

Matrix degree_matrix(const Graph& g);
// L = D - A.
Matrix laplacian(const Graph& g);
// I - D^{-1/2} A D^{-1/2}; every node must have positive degree.
Matrix normalized_laplacian(const Graph& g);
// m x n signed incidence; row e is sqrt(w_e) * (e_head - e_tail) with the
// head fixed at the smaller endpoint, so that B^T B = L.
Matrix incidence(const Graph& g);

bool is_connected(const Graph& g);

// Copy of g with a single degree feature column (degree / max degree)
// injected when no features are present.
Graph with_degree_features(const Graph& g);

}  // namespace sgr
