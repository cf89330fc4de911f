#pragma once

#include <functional>
#include <map>
#include <string>

#include "sgr/generators.hpp"
#include "sgr/matrix.hpp"
#include "sgr/tape.hpp"

namespace sgr {

// Named parameters plus Adam state. std::map keeps iteration order stable,
// which keeps training runs reproducible.
struct ParameterSet {
    struct Entry {
        Matrix value;
        Matrix m;  // first moment
        Matrix v;  // second moment
    };
    std::map<std::string, Entry> entries;
    long step = 0;

    void add(const std::string& name, Matrix value);
    Matrix& at(const std::string& name);
    const Matrix& at(const std::string& name) const;
    bool has(const std::string& name) const { return entries.count(name) > 0; }
};

using GradMap = std::map<std::string, Matrix>;
using Binding = std::map<std::string, Tape::Id>;

// Registers every parameter as a tape input; backward() then yields per-name
// gradients via collect_grads.
Binding bind_params(Tape& tape, const ParameterSet& params);
GradMap collect_grads(const Tape& tape, const Binding& binding);

enum class Head { tanh_head, softmax_head, linear_head };

// One hidden layer, tanh in the middle, head as configured.
struct MLPConfig {
    std::size_t in = 1;
    std::size_t hidden = 32;
    std::size_t out = 32;
    Head head = Head::tanh_head;
};

// Glorot-uniform init of w1/b1/w2/b2 under `prefix.`.
void init_mlp(ParameterSet& params, const std::string& prefix, const MLPConfig& cfg, Rng& rng);
Tape::Id mlp_forward(Tape& tape, const Binding& binding, const std::string& prefix,
                     Tape::Id x, const MLPConfig& cfg);

Matrix glorot(std::size_t rows, std::size_t cols, Rng& rng);

struct AdamConfig {
    double lr = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;  // decoupled, applied after the adaptive step
};

void adam_step(ParameterSet& params, const GradMap& grads, const AdamConfig& cfg);

// Builds the loss for the current parameter values; used both for the
// analytic pass and for the central-difference probes.
using LossBuilder = std::function<Tape::Id(Tape&, const Binding&)>;

// Max relative error between analytic and central-difference gradients over
// every parameter entry: |a - n| / max(1e-8, |a| + |n|).
double grad_check(const LossBuilder& build, ParameterSet& params, double h);

}  // namespace sgr
