#pragma once

#include <vector>

#include "sgr/graph.hpp"
#include "sgr/nn.hpp"
#include "sgr/spectral.hpp"
#include "sgr/tape.hpp"

namespace sgr {

// Commute-time layer: Z = tanh(MLP(X)), R(Z) = pairwise distances / vol,
// T = R(Z) o A. The loss couples the Dirichlet quotient of Z with a
// normalized-Gram orthogonality penalty.
struct CTLayerConfig {
    MLPConfig mlp{1, 32, 32, Head::tanh_head};
    bool squared_distance = false;  // plain Euclidean by default
};

struct CTLayerOutput {
    Matrix t;  // rewired support, zero off the edge set of A
    Matrix z;  // learned embedding, one row per node
    double loss_ct = 0.0;
};

// Standalone loss value; rejects collapsed embeddings (Tr[Z^T D Z] ~ 0).
double ct_loss(const Matrix& z, const Matrix& l, const Matrix& d);

ParameterSet init_ct_params(const CTLayerConfig& cfg, std::uint64_t seed);
CTLayerOutput ct_layer_forward(const Graph& g, const ParameterSet& params,
                               const CTLayerConfig& cfg);

struct RewireTrainConfig {
    AdamConfig adam;
    int epochs = 200;
    std::size_t batch = 8;
    std::uint64_t seed = 0;
};

struct RewireTrainResult {
    ParameterSet params;
    std::vector<double> loss_trace;  // mean loss per epoch
};

RewireTrainResult train_ct_embedder(const std::vector<Graph>& graphs, const CTLayerConfig& cfg,
                                    const RewireTrainConfig& tc);

// Rank correlation with average ranks on ties; used to compare learned
// edge distances against spectral resistances.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Spectral-gap layer: S = softmax(MLP(X)), a Fiedler-vector surrogate
// f2 = (S_.0 - S_.1)/sqrt(n), one explicit gradient step on the adjacency
// A~ = clamp(A - mu * grad lambda_2, 0), masked back to A's support.
// The gap surrogate in the Fiedler loss is the Rayleigh quotient of f2 on
// the rewired adjacency, so the step size and the assignment both feel
// pressure to shrink the gap.
enum class GapMode { rcut, ncut };

struct GapLayerConfig {
    MLPConfig mlp{1, 32, 2, Head::softmax_head};
    GapMode mode = GapMode::rcut;
    double mu = 0.5;
    double alpha = 1.0;
    bool learnable_mu = false;  // optimized through a softplus when on
    // Rounds of centered random-walk averaging applied to the features
    // ahead of the MLP. Raw per-node scalars carry no cluster signal on
    // near-regular graphs; a few rounds expose the slow mixing directions.
    std::size_t mp_rounds = 0;
};

struct GapLayerOutput {
    Matrix t;       // symmetrized, support-masked rewired adjacency
    Matrix atilde;  // adjacency after the gradient step, before masking
    Matrix s;       // soft assignments, n x 2
    Matrix grad;    // gap gradient used for the step
    std::vector<double> f2;
    double loss_cut = 0.0;
    double loss_fiedler = 0.0;
    double loss_gap = 0.0;
    double lambda_approx = 0.0;  // Rayleigh surrogate of the gap
    double mu = 0.0;             // effective step size used
};

std::vector<double> fiedler_approx(const Matrix& s);
// Fixed feature-smoothing operator: mp_rounds of random-walk averaging,
// each followed by mean centering, scaled so the plain degree profile
// comes out with unit peak amplitude.
Matrix smoothing_operator(const Graph& g, std::size_t rounds);
Matrix grad_rcut(const std::vector<double>& f2);
// Paper-form normalized-gap gradient evaluated at the current adjacency;
// directional, the rcut path is the exact one.
Matrix grad_ncut(const std::vector<double>& f2, const Matrix& a);
// Central-difference oracle for the gap under symmetric edge-weight
// perturbation; requires a simple gap (lambda_3 - lambda_2 >= 1e-6).
Matrix fd_gap_gradient(const Graph& g, bool normalized, double h);

ParameterSet init_gap_params(const GapLayerConfig& cfg, std::uint64_t seed);
GapLayerOutput gap_layer_forward(const Graph& g, const ParameterSet& params,
                                 const GapLayerConfig& cfg);
RewireTrainResult train_gap_layer(const std::vector<Graph>& graphs, const GapLayerConfig& cfg,
                                  const RewireTrainConfig& tc);

// Tape-level builders shared with the GNN harness. Constants (A, L, D,
// masks) come from the graph; x carries the node features already on tape.
struct CTLayerNodes {
    Tape::Id z = -1, t = -1, loss = -1;
};
CTLayerNodes ct_layer_nodes(Tape& tape, const Binding& binding, const std::string& prefix,
                            const CTLayerConfig& cfg, Tape::Id x, const Graph& g);

struct GapLayerNodes {
    Tape::Id s = -1, f2 = -1, grad = -1, atilde = -1, t = -1;
    Tape::Id loss_cut = -1, loss_fiedler = -1, loss = -1, lambda = -1;
};
GapLayerNodes gap_layer_nodes(Tape& tape, const Binding& binding, const std::string& prefix,
                              const GapLayerConfig& cfg, Tape::Id x, const Graph& g);

// Dirichlet quotient + orthogonality loss on tape (guarded denominators).
Tape::Id ct_loss_nodes(Tape& tape, Tape::Id z, const Matrix& l, const Matrix& d);

// Mincut-style relaxation losses for an assignment matrix s over adjacency
// a, with orthogonality target I_k / sqrt(k).
struct CutLossNodes {
    Tape::Id cut = -1, orth = -1, total = -1;
};
CutLossNodes cut_loss_nodes(Tape& tape, Tape::Id s, const Matrix& a);

}  // namespace sgr
