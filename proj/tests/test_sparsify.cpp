#include <cmath>
#include <vector>

#include "doctest.h"
#include "sgr/generators.hpp"
#include "sgr/sparsify.hpp"
#include "sgr/spectral.hpp"
#include "test_util.hpp"

using namespace sgr;

namespace {

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
    return build_graph(n, edges);
}

}  // namespace

TEST_CASE("projected incidence norms recover effective resistances") {
    for (const char* name : {"P2", "P3", "K3", "C4", "barbell6"}) {
        Graph g = gen_named(name);
        ProjectedIncidence pi = projected_incidence(g);
        Matrix r = resistance_matrix(g).resistance;

        REQUIRE(pi.edges.size() == edge_count(g));
        CHECK(pi.v.rows() == pi.edges.size());
        CHECK(pi.v.cols() == g.n);
        for (std::size_t e = 0; e < pi.edges.size(); ++e) {
            double norm2 = 0;
            for (std::size_t j = 0; j < g.n; ++j) norm2 += pi.v(e, j) * pi.v(e, j);
            double expected = r(pi.edges[e].u, pi.edges[e].v);
            CHECK(std::abs(norm2 - expected) <= 1e-7);
            CHECK(std::abs(pi.leverage[e] - expected) <= 1e-7);
        }
    }
}

TEST_CASE("greedy sparsifier keeps the complete graph intact") {
    Graph k10 = complete_graph(10);
    SparsifyResult r = greedy_sparsify(k10, 0.35);

    CHECK(r.method == "greedy");
    CHECK(r.eps == 0.35);
    CHECK(r.gamma == doctest::Approx(1.35 / 0.65).epsilon(1e-12));
    CHECK(r.accumulator_ok);
    // every K10 leverage is (n-1)/binom(n,2) = 1/5, far below the gamma budget,
    // so the scan accepts all 45 edges
    CHECK(r.kept.size() == 45);
    CHECK(r.kept_r.size() == 45);
    for (double lev : r.kept_r) CHECK(lev == doctest::Approx(0.2).epsilon(1e-9));
    check_close(r.sparsified.adjacency, k10.adjacency, 0.0);
}

TEST_CASE("greedy acceptance order is descending in resistance") {
    Graph g = gen_er(12, 0.4, 31);
    SparsifyResult r = greedy_sparsify(g, 0.9);
    REQUIRE(!r.kept_r.empty());
    for (std::size_t i = 1; i < r.kept_r.size(); ++i)
        CHECK(r.kept_r[i] <= r.kept_r[i - 1] + 1e-12);
    // kept edges retain their original weights
    for (const Edge& e : r.kept)
        CHECK(r.sparsified.adjacency(e.u, e.v) == g.adjacency(e.u, e.v));

    Graph b6 = gen_named("barbell6");
    SparsifyResult rb = greedy_sparsify(b6, 0.9);
    CHECK(rb.kept.size() == 7);
    CHECK(rb.kept_r.front() == doctest::Approx(1.0).epsilon(1e-9));  // bridge first
}

TEST_CASE("sparsify validates its accuracy parameter") {
    Graph k10 = complete_graph(10);
    expect_error([&] { greedy_sparsify(k10, 0.3); }, "eps must be in (1/sqrt(n), 1]");
    expect_error([&] { greedy_sparsify(k10, 1.1); }, "eps must be in (1/sqrt(n), 1]");
    expect_error([&] { sample_sparsify(k10, 0.2, 0); }, "eps must be in (1/sqrt(n), 1]");

    Graph two;
    two.n = 4;
    two.adjacency = Matrix(4, 4);
    two.adjacency(0, 1) = two.adjacency(1, 0) = 1.0;
    two.adjacency(2, 3) = two.adjacency(3, 2) = 1.0;
    expect_error([&] { greedy_sparsify(two, 0.9); }, "greedy_sparsify: disconnected graph");
    expect_error([&] { sample_sparsify(two, 0.9, 0); }, "sample_sparsify: disconnected graph");
}

TEST_CASE("sampling draw count and determinism") {
    Graph c4 = gen_named("C4");
    SparsifyResult r = sample_sparsify(c4, 0.6, 42);
    CHECK(r.method == "sample");
    CHECK(r.draws == 16);  // ceil(4 ln 4 / 0.36)
    CHECK(r.sparsified.n == 4);

    SparsifyResult again = sample_sparsify(c4, 0.6, 42);
    check_close(r.sparsified.adjacency, again.sparsified.adjacency, 0.0);
    CHECK(edge_count(r.sparsified) <= 4);
    for (const Edge& e : edge_list(r.sparsified)) CHECK(c4.has_edge(e.u, e.v));
}

TEST_CASE("sampled laplacian is unbiased on C4") {
    Graph c4 = gen_named("C4");
    Matrix l = laplacian(c4);
    Matrix mean(4, 4);
    const int runs = 200;
    for (int s = 0; s < runs; ++s)
        mean += laplacian(sample_sparsify(c4, 0.6, std::uint64_t(s)).sparsified);
    mean *= 1.0 / runs;
    CHECK(frobenius_norm(mean - l) / frobenius_norm(l) <= 0.05);
}

TEST_CASE("similarity report on the identity case is exactly one") {
    Graph g = gen_er(10, 0.4, 55);
    SimilarityReport r = spectral_similarity_report(g, g, 0.5, 16, 7);
    CHECK(r.min_ratio == 1.0);
    CHECK(r.max_ratio == 1.0);
    CHECK(r.fraction_in_range == 1.0);
    CHECK(r.probe_count == (g.n - 1) + 16);
    CHECK(r.eps == 0.5);
}

TEST_CASE("similarity report flags node count mismatches") {
    Graph g = gen_named("C4");
    Graph h = gen_named("K3");
    expect_error([&] { spectral_similarity_report(g, h, 0.5, 4, 0); },
                 "spectral_similarity_report: node counts differ");
}

TEST_CASE("similarity ratios bracket one for a sampled sparsifier") {
    Graph g = gen_er(14, 0.5, 91);
    SparsifyResult s = sample_sparsify(g, 0.9, 5);
    SimilarityReport r = spectral_similarity_report(g, s.sparsified, 0.9, 8, 11);
    CHECK(r.min_ratio <= r.max_ratio);
    CHECK(r.min_ratio >= 0.0);
    CHECK(r.fraction_in_range >= 0.0);
    CHECK(r.fraction_in_range <= 1.0);
}
