#include "sgr/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgr/error.hpp"

namespace sgr {

namespace {

constexpr double kDenGuard = 1e-12;

Matrix normalized_self_loop_adjacency(const Graph& g) {
    const std::size_t n = g.n;
    Matrix ahat = g.adjacency;
    for (std::size_t i = 0; i < n; ++i) ahat(i, i) += 1.0;
    std::vector<double> dinv(n);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < n; ++j) deg += ahat(i, j);
        dinv[i] = 1.0 / std::sqrt(deg);
    }
    Matrix t(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t(i, j) = dinv[i] * ahat(i, j) * dinv[j];
    return t;
}

Tape::Id activate(Tape& tape, Tape::Id pre, Activation act) {
    return act == Activation::relu ? tape.clamp_min(pre, 0.0) : tape.tanh(pre);
}

CTLayerConfig ct_config(const ModelSpec& spec) {
    CTLayerConfig cfg;
    cfg.mlp.in = spec.hidden;
    cfg.squared_distance = spec.squared_distance;
    return cfg;
}

GapLayerConfig gap_config(const ModelSpec& spec) {
    GapLayerConfig cfg;
    cfg.mlp.in = spec.hidden;
    cfg.mode = spec.gap_mode;
    cfg.mu = spec.mu;
    cfg.alpha = spec.alpha;
    cfg.mp_rounds = spec.gap_mp_rounds;
    return cfg;
}

Graph prepared(const Graph& g, const ModelSpec& spec, const char* who) {
    Graph gf = g.features ? g : with_degree_features(g);
    require(gf.features->cols() == spec.in_dim, who, ": feature dim ", gf.features->cols(),
            " does not match model input dim ", spec.in_dim);
    require(gf.label.has_value(), who, ": graph has no label");
    require(*gf.label >= 0 && static_cast<std::size_t>(*gf.label) < spec.classes, who,
            ": label ", *gf.label, " outside [0, ", spec.classes, ")");
    return gf;
}

int argmax_row(const Matrix& logits) {
    int best = 0;
    for (std::size_t c = 1; c < logits.cols(); ++c)
        if (logits(0, c) > logits(0, best)) best = static_cast<int>(c);
    return best;
}

int predict(const ModelSpec& spec, const ParameterSet& params, const Graph& g) {
    Tape tape;
    Binding binding = bind_params(tape, params);
    const ModelForward f = model_forward(tape, binding, spec, g, false);
    return argmax_row(tape.value(f.logits));
}

}  // namespace

Tape::Id gcn_conv(Tape& tape, Tape::Id t, Tape::Id x, Tape::Id w, Tape::Id w_self, Tape::Id b,
                  Activation act) {
    const Tape::Id mixed = tape.matmul(t, tape.matmul(x, w));
    const Tape::Id pre = tape.add(tape.add(mixed, tape.matmul(x, w_self)), b);
    return activate(tape, pre, act);
}

void check_rewired_support(const Matrix& t, const Matrix& a) {
    require(t.rows() == a.rows() && t.cols() == a.cols(),
            "rewired support: shape ", t.rows(), "x", t.cols(), " does not match adjacency ",
            a.rows(), "x", a.cols());
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j)
            require(t(i, j) == 0.0 || a(i, j) != 0.0, "rewired support: entry (", i, ",", j,
                    ") = ", t(i, j), " lies outside the adjacency support");
}

PoolResult mincut_pool(const Matrix& a, const Matrix& x, const Matrix& s_pool) {
    const std::size_t n = a.rows();
    require(a.cols() == n, "mincut_pool: adjacency must be square");
    require(x.rows() == n, "mincut_pool: feature rows ", x.rows(), " != ", n);
    require(s_pool.rows() == n, "mincut_pool: assignment rows ", s_pool.rows(), " != ", n);
    const std::size_t k = s_pool.cols();

    const Matrix st = transpose(s_pool);
    PoolResult out;
    out.a_pooled = matmul(st, matmul(a, s_pool));
    out.x_pooled = matmul(st, x);

    Matrix d(n, n);
    for (std::size_t u = 0; u < n; ++u) {
        double deg = 0.0;
        for (std::size_t v = 0; v < n; ++v) deg += a(u, v);
        d(u, u) = deg;
    }
    const double num = trace(out.a_pooled);
    const double den = trace(matmul(st, matmul(d, s_pool))) + kDenGuard;
    out.cut_loss = -num / den;

    const Matrix gram = matmul(st, s_pool);
    Matrix normalized = gram * (1.0 / (frobenius_norm(gram) + kDenGuard));
    Matrix target = Matrix::identity(k);
    target *= 1.0 / std::sqrt(static_cast<double>(k));
    normalized -= target;
    out.orth_loss = frobenius_norm(normalized);
    return out;
}

ParameterSet build_model(const ModelSpec& spec, std::uint64_t seed) {
    require(spec.classes >= 2, "build_model: need at least two classes");
    require(spec.k_pool >= 1, "build_model: k_pool must be positive");
    ParameterSet params;
    Rng rng(seed);
    params.add("lin.w", glorot(spec.in_dim, spec.hidden, rng));
    params.add("lin.b", Matrix(1, spec.hidden));
    if (spec.kind == ModelKind::ct) init_mlp(params, "ct", ct_config(spec).mlp, rng);
    if (spec.kind == ModelKind::gap) init_mlp(params, "gap", gap_config(spec).mlp, rng);
    params.add("conv1.w", glorot(spec.hidden, spec.hidden, rng));
    params.add("conv1.ws", glorot(spec.hidden, spec.hidden, rng));
    params.add("conv1.b", Matrix(1, spec.hidden));
    params.add("pool.w", glorot(spec.hidden, spec.k_pool, rng));
    params.add("pool.b", Matrix(1, spec.k_pool));
    params.add("conv2.w", glorot(spec.hidden, spec.hidden, rng));
    params.add("conv2.ws", glorot(spec.hidden, spec.hidden, rng));
    params.add("conv2.b", Matrix(1, spec.hidden));
    params.add("cls.w", glorot(spec.hidden, spec.classes, rng));
    params.add("cls.b", Matrix(1, spec.classes));
    return params;
}

ModelForward model_forward(Tape& tape, const Binding& binding, const ModelSpec& spec,
                           const Graph& g, bool include_rewire_loss) {
    require(g.features.has_value(), "model_forward: graph has no features");
    require(g.features->cols() == spec.in_dim, "model_forward: feature dim ",
            g.features->cols(), " does not match model input dim ", spec.in_dim);
    require(g.label.has_value(), "model_forward: graph has no label");

    ModelForward out;
    const Tape::Id x = tape.constant(*g.features);
    const Tape::Id h = tape.add(tape.matmul(x, binding.at("lin.w")), binding.at("lin.b"));

    Tape::Id t = -1;
    if (spec.kind == ModelKind::baseline) {
        t = tape.constant(normalized_self_loop_adjacency(g));
    } else if (spec.kind == ModelKind::ct) {
        const CTLayerNodes ctn = ct_layer_nodes(tape, binding, "ct", ct_config(spec), h, g);
        t = ctn.t;
        out.rewire_loss = ctn.loss;
    } else {
        const GapLayerNodes gpn = gap_layer_nodes(tape, binding, "gap", gap_config(spec), h, g);
        t = gpn.t;
        out.rewire_loss = gpn.loss;
    }
    if (spec.kind != ModelKind::baseline) check_rewired_support(tape.value(t), g.adjacency);
    out.t = t;

    const Tape::Id c1 = gcn_conv(tape, t, h, binding.at("conv1.w"), binding.at("conv1.ws"),
                                 binding.at("conv1.b"), spec.conv_activation);
    const Tape::Id s_pool = tape.row_softmax(
        tape.add(tape.matmul(c1, binding.at("pool.w")), binding.at("pool.b")));
    const CutLossNodes aux = cut_loss_nodes(tape, s_pool, g.adjacency);
    out.aux = aux.total;

    const Tape::Id st = tape.transpose(s_pool);
    const Tape::Id a2 = tape.matmul(st, tape.matmul(t, s_pool));
    const Tape::Id x2 = tape.matmul(st, c1);
    const Tape::Id c2 = gcn_conv(tape, a2, x2, binding.at("conv2.w"), binding.at("conv2.ws"),
                                 binding.at("conv2.b"), spec.conv_activation);

    Matrix mean_row(1, spec.k_pool, 1.0 / static_cast<double>(spec.k_pool));
    const Tape::Id readout = tape.matmul(tape.constant(mean_row), c2);
    out.logits = tape.add(tape.matmul(readout, binding.at("cls.w")), binding.at("cls.b"));
    out.ce = tape.softmax_xent(out.logits, *g.label);

    Tape::Id total = tape.add(out.ce, out.aux);
    if (include_rewire_loss && out.rewire_loss >= 0) total = tape.add(total, out.rewire_loss);
    out.loss = total;
    return out;
}

TrainOutput train_gnn(const ModelSpec& spec, const std::vector<Graph>& dataset,
                      const TrainConfig& cfg) {
    require(!dataset.empty(), "train_gnn: empty dataset");
    std::vector<Graph> data;
    data.reserve(dataset.size());
    for (const Graph& g : dataset) data.push_back(prepared(g, spec, "train_gnn"));

    // Stratified split: shuffle indices per class, peel off the test share.
    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < data.size(); ++i) by_label[*data[i].label].push_back(i);
    Rng rng(cfg.seed);
    std::vector<std::size_t> train_idx, test_idx;
    for (auto& [label, idx] : by_label) {
        rng.shuffle(idx);
        const std::size_t n_test =
            static_cast<std::size_t>(cfg.test_fraction * static_cast<double>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n_test ? test_idx : train_idx).push_back(idx[i]);
    }
    require(!train_idx.empty(), "train_gnn: empty training split");

    TrainOutput out;
    out.params = build_model(spec, cfg.seed);
    out.metrics.train_size = train_idx.size();
    out.metrics.test_size = test_idx.size();

    const std::size_t batch = std::max<std::size_t>(1, cfg.batch);
    std::vector<std::size_t> order = train_idx;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t stop = std::min(order.size(), start + batch);
            GradMap batch_grads;
            for (std::size_t i = start; i < stop; ++i) {
                Tape tape;
                Binding binding = bind_params(tape, out.params);
                const ModelForward f = model_forward(tape, binding, spec, data[order[i]]);
                const double loss = tape.scalar_value(f.loss);
                require(std::isfinite(loss), "train_gnn: diverged (non-finite loss) at epoch ",
                        epoch);
                epoch_loss += loss;
                tape.backward(f.loss);
                GradMap grads = collect_grads(tape, binding);
                if (batch_grads.empty()) {
                    batch_grads = std::move(grads);
                } else {
                    for (auto& [name, grad] : grads) batch_grads.at(name) += grad;
                }
            }
            const double inv = 1.0 / static_cast<double>(stop - start);
            for (auto& [name, grad] : batch_grads) grad *= inv;
            adam_step(out.params, batch_grads, cfg.adam);
        }
        out.metrics.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    }

    std::size_t train_hits = 0;
    for (const std::size_t i : train_idx)
        if (predict(spec, out.params, data[i]) == *data[i].label) ++train_hits;
    out.metrics.train_accuracy =
        static_cast<double>(train_hits) / static_cast<double>(train_idx.size());

    out.metrics.confusion = Matrix(spec.classes, spec.classes);
    std::size_t test_hits = 0;
    for (const std::size_t i : test_idx) {
        const int pred = predict(spec, out.params, data[i]);
        out.metrics.confusion(static_cast<std::size_t>(*data[i].label),
                              static_cast<std::size_t>(pred)) += 1.0;
        if (pred == *data[i].label) ++test_hits;
    }
    out.metrics.test_accuracy =
        test_idx.empty() ? 0.0
                         : static_cast<double>(test_hits) / static_cast<double>(test_idx.size());
    return out;
}

double evaluate_accuracy(const ModelSpec& spec, const ParameterSet& params,
                         const std::vector<Graph>& graphs) {
    require(!graphs.empty(), "evaluate_accuracy: empty set");
    std::size_t hits = 0;
    for (const Graph& g : graphs) {
        const Graph gf = prepared(g, spec, "evaluate_accuracy");
        if (predict(spec, params, gf) == *gf.label) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(graphs.size());
}

std::vector<Graph> synthetic_sbm_dataset(std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<Graph> graphs;
    graphs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = 20 + rng.below(21);
        const int label = i < count / 2 ? 0 : 1;
        const double p = label == 0 ? 0.8 : 0.5;
        const double q = label == 0 ? rng.uniform(0.10, 0.15) : rng.uniform(0.01, 0.10);
        const std::uint64_t child = seed * 1000003ULL + i;
        SbmSample sample = gen_sbm((n + 1) / 2, n / 2, p, q, child);
        sample.graph.label = label;
        graphs.push_back(std::move(sample.graph));
    }
    return graphs;
}

std::vector<Graph> synthetic_er_dataset(std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<Graph> graphs;
    graphs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = 20 + rng.below(21);
        const int label = i < count / 2 ? 0 : 1;
        const double p = label == 0 ? rng.uniform(0.3, 0.5) : rng.uniform(0.4, 0.8);
        const std::uint64_t child = seed * 1000003ULL + i;
        Graph g = gen_er(n, p, child);
        g.label = label;
        graphs.push_back(std::move(g));
    }
    return graphs;
}

namespace {

ModelSpec spec_for(const std::string& model) {
    ModelSpec spec;
    if (model == "baseline") {
        spec.kind = ModelKind::baseline;
    } else if (model == "ct") {
        spec.kind = ModelKind::ct;
    } else if (model == "gap-rcut") {
        spec.kind = ModelKind::gap;
        spec.gap_mode = GapMode::rcut;
    } else if (model == "gap-ncut") {
        spec.kind = ModelKind::gap;
        spec.gap_mode = GapMode::ncut;
    } else {
        fail("experiment: unknown model kind '", model, "'");
    }
    return spec;
}

}  // namespace

ExperimentResult experiment_synthetic(const std::vector<std::uint64_t>& seeds, int epochs,
                                      std::size_t graphs_per_dataset) {
    require(!seeds.empty(), "experiment: need at least one seed");
    ExperimentResult res;
    res.datasets = {"sbm", "er"};
    res.models = {"baseline", "ct", "gap-rcut", "gap-ncut"};
    res.graphs_per_dataset = graphs_per_dataset;
    res.epochs = epochs;

    for (const std::string& ds : res.datasets) {
        for (const std::uint64_t seed : seeds) {
            const std::vector<Graph> graphs =
                ds == "sbm" ? synthetic_sbm_dataset(seed, graphs_per_dataset)
                            : synthetic_er_dataset(seed, graphs_per_dataset);
            for (const std::string& model : res.models) {
                TrainConfig tc;
                tc.epochs = epochs;
                tc.seed = seed;
                const TrainOutput out = train_gnn(spec_for(model), graphs, tc);
                res.table[ds][model].runs.push_back(100.0 * out.metrics.test_accuracy);
            }
        }
        for (const std::string& model : res.models) {
            ExperimentCell& cell = res.table[ds][model];
            const double n = static_cast<double>(cell.runs.size());
            double mean = 0.0;
            for (const double r : cell.runs) mean += r;
            mean /= n;
            double var = 0.0;
            for (const double r : cell.runs) var += (r - mean) * (r - mean);
            cell.mean = mean;
            cell.stddev = std::sqrt(var / n);
        }
    }

    res.scale_note =
        "desk-scale protocol: one split per seed, " + std::to_string(epochs) + " epochs, " +
        std::to_string(graphs_per_dataset) +
        " graphs per dataset; numbers gauge relative behavior, not tuned benchmarks";
    return res;
}

}  // namespace sgr
