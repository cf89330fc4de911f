#pragma once

#include <map>
#include <string>
#include <vector>

#include "sgr/graph.hpp"
#include "sgr/nn.hpp"
#include "sgr/rewiring.hpp"

namespace sgr {

enum class ModelKind { baseline, ct, gap };
enum class Activation { relu, tanh };

// Shared architecture: Linear -> [rewiring layer] -> Conv -> MinCutPool ->
// Conv -> mean readout -> classifier. The baseline convolves over the
// symmetric degree-normalized adjacency with self-loops; rewired kinds
// convolve over the layer's T matrix, with an explicit self-transform term
// carrying node identity since T has a zero diagonal.
struct ModelSpec {
    ModelKind kind = ModelKind::baseline;
    GapMode gap_mode = GapMode::rcut;
    std::size_t in_dim = 1;
    std::size_t hidden = 32;
    std::size_t k_pool = 8;
    std::size_t classes = 2;
    Activation conv_activation = Activation::relu;
    bool squared_distance = false;  // CT layer distance mode
    double mu = 0.5;                // GAP step size
    // GAP Fiedler-loss weight, kept small so the gap penalty cannot flatten
    // the assignment into indifference.
    double alpha = 0.1;
    std::size_t gap_mp_rounds = 8;  // feature smoothing ahead of the GAP MLP
};

struct TrainConfig {
    AdamConfig adam;
    int epochs = 60;
    std::size_t batch = 32;
    double test_fraction = 0.15;
    std::uint64_t seed = 0;
};

struct Metrics {
    std::vector<double> train_loss;  // mean total loss per epoch
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    Matrix confusion;  // classes x classes, rows = true label
    std::size_t train_size = 0;
    std::size_t test_size = 0;
};

// activation(T X W + X W_self + b).
Tape::Id gcn_conv(Tape& tape, Tape::Id t, Tape::Id x, Tape::Id w, Tape::Id w_self, Tape::Id b,
                  Activation act);

// Rewired supports must stay inside A's support (diagonal excluded).
void check_rewired_support(const Matrix& t, const Matrix& a);

// Plain-matrix pooling: A' = S^T A S, X' = S^T X, plus the two mincut
// auxiliary losses of the assignment.
struct PoolResult {
    Matrix a_pooled;
    Matrix x_pooled;
    double cut_loss = 0.0;
    double orth_loss = 0.0;
};
PoolResult mincut_pool(const Matrix& a, const Matrix& x, const Matrix& s_pool);

ParameterSet build_model(const ModelSpec& spec, std::uint64_t seed);

struct ModelForward {
    Tape::Id logits = -1;
    Tape::Id loss = -1;         // cross-entropy + pooling aux (+ rewire loss)
    Tape::Id ce = -1;
    Tape::Id aux = -1;          // pooling losses
    Tape::Id rewire_loss = -1;  // -1 for baseline
    Tape::Id t = -1;            // convolution support actually used
};
// Graph must carry features and a label (inject degrees upstream).
ModelForward model_forward(Tape& tape, const Binding& binding, const ModelSpec& spec,
                           const Graph& g, bool include_rewire_loss = true);

struct TrainOutput {
    ParameterSet params;
    Metrics metrics;
};
TrainOutput train_gnn(const ModelSpec& spec, const std::vector<Graph>& dataset,
                      const TrainConfig& cfg);

// Accuracy of a trained model over a labeled set.
double evaluate_accuracy(const ModelSpec& spec, const ParameterSet& params,
                         const std::vector<Graph>& graphs);

// Labeled two-class corpora used by the synthetic benchmark: SBM pairs
// differing in intra/inter density, ER pairs differing in density range.
std::vector<Graph> synthetic_sbm_dataset(std::uint64_t seed, std::size_t count);
std::vector<Graph> synthetic_er_dataset(std::uint64_t seed, std::size_t count);

struct ExperimentCell {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> runs;  // accuracy (percent) per seed
};

struct ExperimentResult {
    std::vector<std::string> datasets;
    std::vector<std::string> models;
    std::map<std::string, std::map<std::string, ExperimentCell>> table;
    std::string scale_note;
    std::size_t graphs_per_dataset = 0;
    int epochs = 0;
};

// Two-class SBM (intra/inter density split) and two-class ER (density
// ranges) benchmark at desk scale: four model kinds per seed, last-epoch
// test accuracy, mean and std across seeds.
ExperimentResult experiment_synthetic(const std::vector<std::uint64_t>& seeds, int epochs = 60,
                                      std::size_t graphs_per_dataset = 200);

}  // namespace sgr
