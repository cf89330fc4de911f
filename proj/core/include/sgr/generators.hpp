#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sgr/graph.hpp"

namespace sgr {

// Seeded RNG with hand-rolled draw helpers so that generated graphs,
// splits and inits are bit-stable regardless of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1).
    double uniform();
    // Uniform double in [lo, hi).
    double uniform(double lo, double hi);
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

// Erdos-Renyi G(n, p), resampled until connected (at most max_tries).
Graph gen_er(std::size_t n, double p, std::uint64_t seed, int max_tries = 100);

struct SbmSample {
    Graph graph;
    std::vector<int> block;  // block id per node
};

// Two-block stochastic block model with intra probability p and inter
// probability q < p, resampled until connected.
SbmSample gen_sbm(std::size_t n1, std::size_t n2, double p, double q, std::uint64_t seed,
                  int max_tries = 100);

// Small named fixtures: K3, P2, P3, C4, barbell6 (two triangles joined by
// one bridge edge).
Graph gen_named(const std::string& name);

}  // namespace sgr
