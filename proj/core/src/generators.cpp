#include "sgr/generators.hpp"

#include "sgr/error.hpp"

namespace sgr {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

Graph gen_er(std::size_t n, double p, std::uint64_t seed, int max_tries) {
    require(n >= 2, "gen_er: need at least 2 nodes");
    require(p > 0.0 && p <= 1.0, "gen_er: p must be in (0, 1], got ", p);
    Rng rng(seed);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<Edge> edges;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (rng.uniform() < p) edges.push_back({u, v, 1.0});
        Graph g = build_graph(n, edges);
        if (is_connected(g)) return g;
    }
    fail("gen_er: no connected sample after ", max_tries, " tries (n=", n, ", p=", p, ")");
}

SbmSample gen_sbm(std::size_t n1, std::size_t n2, double p, double q, std::uint64_t seed,
                  int max_tries) {
    require(n1 >= 1 && n2 >= 1, "gen_sbm: empty block");
    require(p > 0.0 && p <= 1.0, "gen_sbm: p must be in (0, 1], got ", p);
    require(q >= 0.0 && q < p, "gen_sbm: need 0 <= q < p, got q=", q, ", p=", p);
    const std::size_t n = n1 + n2;
    std::vector<int> block(n, 0);
    for (std::size_t i = n1; i < n; ++i) block[i] = 1;
    Rng rng(seed);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<Edge> edges;
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                const double prob = block[u] == block[v] ? p : q;
                if (rng.uniform() < prob) edges.push_back({u, v, 1.0});
            }
        }
        Graph g = build_graph(n, edges);
        if (is_connected(g)) return {std::move(g), block};
    }
    fail("gen_sbm: no connected sample after ", max_tries, " tries");
}

Graph gen_named(const std::string& name) {
    if (name == "P2") return build_graph(2, {{0, 1}});
    if (name == "P3") return build_graph(3, {{0, 1}, {1, 2}});
    if (name == "K3") return build_graph(3, {{0, 1}, {0, 2}, {1, 2}});
    if (name == "C4") return build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    if (name == "barbell6")
        return build_graph(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
    fail("gen_named: unknown graph '", name, "' (expected K3, P2, P3, C4 or barbell6)");
}

}  // namespace sgr
