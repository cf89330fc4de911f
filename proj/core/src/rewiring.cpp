#include "sgr/rewiring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgr/eig.hpp"
#include "sgr/error.hpp"

namespace sgr {

namespace {

constexpr double kDenGuard = 1e-12;

Matrix support_mask(const Matrix& a) {
    Matrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) m.raw()[i] = a.raw()[i] > 0.0 ? 1.0 : 0.0;
    return m;
}

Tape::Id guarded(Tape& tape, Tape::Id scalar) {
    return tape.add(scalar, tape.constant(Matrix(1, 1, kDenGuard)));
}

Graph featured(const Graph& g, std::size_t expected_dim, const char* who) {
    Graph gf = with_degree_features(g);
    require(gf.features->cols() == expected_dim, who, ": feature dim ", gf.features->cols(),
            " does not match configured input dim ", expected_dim);
    return gf;
}

}  // namespace

double ct_loss(const Matrix& z, const Matrix& l, const Matrix& d) {
    require(z.rows() == l.rows(), "ct_loss: embedding rows must match the Laplacian");
    const Matrix zt = transpose(z);
    const double num = trace(matmul(zt, matmul(l, z)));
    const double den = trace(matmul(zt, matmul(d, z)));
    require(den > kDenGuard, "ct_loss: collapsed embedding (Tr[Z^T D Z] = ", den, ")");
    const Matrix gram = matmul(zt, z);
    const double gn = frobenius_norm(gram);
    Matrix normalized = gram * (1.0 / std::max(gn, kDenGuard));
    normalized -= Matrix::identity(z.cols());
    return num / den + frobenius_norm(normalized);
}

Tape::Id ct_loss_nodes(Tape& tape, Tape::Id z, const Matrix& l, const Matrix& d) {
    const Tape::Id lc = tape.constant(l);
    const Tape::Id dc = tape.constant(d);
    const Tape::Id zt = tape.transpose(z);
    const Tape::Id num = tape.trace(tape.matmul(zt, tape.matmul(lc, z)));
    const Tape::Id den = guarded(tape, tape.trace(tape.matmul(zt, tape.matmul(dc, z))));
    const Tape::Id quot = tape.scalar_div(num, den);
    const Tape::Id gram = tape.matmul(zt, z);
    const Tape::Id gn = guarded(tape, tape.frobenius_norm(gram));
    const Tape::Id normalized = tape.scalar_div(gram, gn);
    const std::size_t k = tape.value(z).cols();
    const Tape::Id diff = tape.sub(normalized, tape.constant(Matrix::identity(k)));
    return tape.add(quot, tape.frobenius_norm(diff));
}

ParameterSet init_ct_params(const CTLayerConfig& cfg, std::uint64_t seed) {
    ParameterSet params;
    Rng rng(seed);
    init_mlp(params, "ct", cfg.mlp, rng);
    return params;
}

CTLayerNodes ct_layer_nodes(Tape& tape, const Binding& binding, const std::string& prefix,
                            const CTLayerConfig& cfg, Tape::Id x, const Graph& g) {
    CTLayerNodes out;
    out.z = mlp_forward(tape, binding, prefix, x, cfg.mlp);
    const Tape::Id dist = tape.cdist(out.z, cfg.squared_distance);
    const Tape::Id r = tape.scale(dist, 1.0 / volume(g));
    out.t = tape.hadamard(r, tape.constant(g.adjacency));
    out.loss = ct_loss_nodes(tape, out.z, laplacian(g), degree_matrix(g));
    return out;
}

CTLayerOutput ct_layer_forward(const Graph& g, const ParameterSet& params,
                               const CTLayerConfig& cfg) {
    const Graph gf = featured(g, cfg.mlp.in, "ct_layer_forward");
    Tape tape;
    Binding binding = bind_params(tape, params);
    const Tape::Id x = tape.constant(*gf.features);
    const CTLayerNodes nodes = ct_layer_nodes(tape, binding, "ct", cfg, x, gf);
    CTLayerOutput out;
    out.t = tape.value(nodes.t);
    out.z = tape.value(nodes.z);
    out.loss_ct = tape.scalar_value(nodes.loss);
    return out;
}

namespace {

// Shared minibatch loop for the standalone rewiring trainers.
template <typename BuildLoss>
RewireTrainResult run_training(ParameterSet params, const std::vector<Graph>& graphs,
                               const RewireTrainConfig& tc, const BuildLoss& build_loss) {
    require(!graphs.empty(), "train: empty dataset");
    RewireTrainResult out;
    Rng rng(tc.seed);
    std::vector<std::size_t> order(graphs.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t batch = std::max<std::size_t>(1, tc.batch);

    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t stop = std::min(order.size(), start + batch);
            GradMap batch_grads;
            for (std::size_t i = start; i < stop; ++i) {
                Tape tape;
                Binding binding = bind_params(tape, params);
                const Tape::Id loss = build_loss(tape, binding, graphs[order[i]]);
                tape.backward(loss);
                epoch_loss += tape.scalar_value(loss);
                GradMap grads = collect_grads(tape, binding);
                if (batch_grads.empty()) {
                    batch_grads = std::move(grads);
                } else {
                    for (auto& [name, g] : batch_grads) g += grads.at(name);
                }
            }
            const double inv = 1.0 / static_cast<double>(stop - start);
            for (auto& [name, g] : batch_grads) g *= inv;
            adam_step(params, batch_grads, tc.adam);
        }
        epoch_loss /= static_cast<double>(order.size());
        require(std::isfinite(epoch_loss), "train: diverged (non-finite loss) at epoch ", epoch);
        out.loss_trace.push_back(epoch_loss);
    }
    out.params = std::move(params);
    return out;
}

}  // namespace

RewireTrainResult train_ct_embedder(const std::vector<Graph>& graphs, const CTLayerConfig& cfg,
                                    const RewireTrainConfig& tc) {
    ParameterSet params = init_ct_params(cfg, tc.seed);
    return run_training(std::move(params), graphs, tc,
                        [&](Tape& tape, const Binding& binding, const Graph& g) {
                            const Graph gf = featured(g, cfg.mlp.in, "train_ct_embedder");
                            const Tape::Id x = tape.constant(*gf.features);
                            return ct_layer_nodes(tape, binding, "ct", cfg, x, gf).loss;
                        });
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    require(a.size() == b.size() && a.size() >= 2, "spearman: need two same-length series");
    const auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> ra = ranks(a);
    const std::vector<double> rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    const double den = std::sqrt(va * vb);
    return den > 0.0 ? cov / den : 0.0;
}

std::vector<double> fiedler_approx(const Matrix& s) {
    require(s.cols() == 2, "fiedler_approx: assignments must have two columns");
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(s.rows()));
    std::vector<double> f2(s.rows());
    for (std::size_t u = 0; u < s.rows(); ++u) f2[u] = (s(u, 0) - s(u, 1)) * inv_sqrt_n;
    return f2;
}

Matrix smoothing_operator(const Graph& g, std::size_t rounds) {
    const std::size_t n = g.n;
    const auto deg = degrees(g);
    for (std::size_t u = 0; u < n; ++u)
        require(deg[u] > 0.0, "smoothing_operator: isolated node ", u);

    Matrix walk(n, n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) walk(u, v) = g.adjacency(u, v) / deg[u];
    Matrix round_op = Matrix::identity(n);
    round_op -= Matrix(n, n, 1.0 / static_cast<double>(n));
    round_op = matmul(round_op, walk);

    Matrix m = Matrix::identity(n);
    for (std::size_t r = 0; r < rounds; ++r) m = matmul(round_op, m);

    // unit peak amplitude on the degree profile; regular graphs smooth to
    // zero and are left unscaled
    double dmax = *std::max_element(deg.begin(), deg.end());
    Matrix ref(n, 1);
    for (std::size_t u = 0; u < n; ++u) ref(u, 0) = deg[u] / dmax;
    ref = matmul(m, ref);
    double amp = 0.0;
    for (double v : ref.raw()) amp = std::max(amp, std::abs(v));
    if (amp > 1e-6) m *= 1.0 / amp;
    return m;
}

Matrix grad_rcut(const std::vector<double>& f2) {
    const std::size_t n = f2.size();
    Matrix g(n, n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) g(u, v) = f2[u] * f2[u] - f2[u] * f2[v];
    return g;
}

Matrix grad_ncut(const std::vector<double>& f2, const Matrix& a) {
    const std::size_t n = f2.size();
    require(a.rows() == n && a.cols() == n, "grad_ncut: adjacency shape mismatch");
    std::vector<double> deg(n, 0.0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) deg[u] += a(u, v);
    for (std::size_t u = 0; u < n; ++u)
        require(deg[u] > 0.0, "grad_ncut: isolated node ", u);

    // q = f2^T D^{1/2} A f2
    double q = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        double row = 0.0;
        for (std::size_t v = 0; v < n; ++v) row += a(u, v) * f2[v];
        q += f2[u] * std::sqrt(deg[u]) * row;
    }

    Matrix g(n, n);
    for (std::size_t u = 0; u < n; ++u) {
        const double dprime = -0.5 * std::pow(deg[u], -1.5);
        for (std::size_t v = 0; v < n; ++v)
            g(u, v) = 2.0 * dprime * q + f2[u] * f2[v] / std::sqrt(deg[u] * deg[v]);
    }
    return g;
}

Matrix fd_gap_gradient(const Graph& g, bool normalized, double h) {
    require(h > 0.0, "fd_gap_gradient: step must be positive");
    const auto gap_of = [&](const Graph& gg) {
        const Matrix op = normalized ? normalized_laplacian(gg) : laplacian(gg);
        return sym_eig(op);
    };
    const auto base = gap_of(g);
    require(base.eigenvalues.size() >= 3, "fd_gap_gradient: need at least 3 nodes");
    require(base.eigenvalues[2] - base.eigenvalues[1] >= 1e-6,
            "fd_gap_gradient: eigenvalue crossing (gap ",
            base.eigenvalues[2] - base.eigenvalues[1], ")");

    Matrix out(g.n, g.n);
    for (const Edge& e : edge_list(g)) {
        require(e.w > h, "fd_gap_gradient: step ", h, " too large for edge weight ", e.w);
        Graph plus = g;
        plus.adjacency(e.u, e.v) += h;
        plus.adjacency(e.v, e.u) += h;
        Graph minus = g;
        minus.adjacency(e.u, e.v) -= h;
        minus.adjacency(e.v, e.u) -= h;
        const double d =
            (gap_of(plus).eigenvalues[1] - gap_of(minus).eigenvalues[1]) / (2.0 * h);
        out(e.u, e.v) = d;
        out(e.v, e.u) = d;
    }
    return out;
}

ParameterSet init_gap_params(const GapLayerConfig& cfg, std::uint64_t seed) {
    ParameterSet params;
    Rng rng(seed);
    init_mlp(params, "gap", cfg.mlp, rng);
    if (cfg.learnable_mu) {
        // softplus(raw) == mu at init
        Matrix raw(1, 1);
        raw(0, 0) = std::log(std::expm1(cfg.mu));
        params.add("gap.mu_raw", raw);
    }
    return params;
}

CutLossNodes cut_loss_nodes(Tape& tape, Tape::Id s, const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix d(n, n);
    for (std::size_t u = 0; u < n; ++u) {
        double deg = 0.0;
        for (std::size_t v = 0; v < n; ++v) deg += a(u, v);
        d(u, u) = deg;
    }
    const Tape::Id ac = tape.constant(a);
    const Tape::Id dc = tape.constant(d);
    const Tape::Id st = tape.transpose(s);
    const Tape::Id num = tape.trace(tape.matmul(st, tape.matmul(ac, s)));
    const Tape::Id den = guarded(tape, tape.trace(tape.matmul(st, tape.matmul(dc, s))));
    CutLossNodes out;
    out.cut = tape.scale(tape.scalar_div(num, den), -1.0);

    const std::size_t k = tape.value(s).cols();
    const Tape::Id gram = tape.matmul(st, s);
    const Tape::Id gn = guarded(tape, tape.frobenius_norm(gram));
    const Tape::Id normalized = tape.scalar_div(gram, gn);
    Matrix target = Matrix::identity(k);
    target *= 1.0 / std::sqrt(static_cast<double>(k));
    out.orth = tape.frobenius_norm(tape.sub(normalized, tape.constant(target)));
    out.total = tape.add(out.cut, out.orth);
    return out;
}

GapLayerNodes gap_layer_nodes(Tape& tape, const Binding& binding, const std::string& prefix,
                              const GapLayerConfig& cfg, Tape::Id x, const Graph& g) {
    const std::size_t n = g.n;
    const auto deg = degrees(g);
    for (std::size_t u = 0; u < n; ++u)
        require(deg[u] > 0.0, "gap_layer: isolated node ", u);

    GapLayerNodes out;
    Tape::Id xin = x;
    if (cfg.mp_rounds > 0)
        xin = tape.matmul(tape.constant(smoothing_operator(g, cfg.mp_rounds)), x);
    out.s = mlp_forward(tape, binding, prefix, xin, cfg.mlp);

    // f2 = (S_.0 - S_.1) / sqrt(n) as a matmul with a fixed 2x1 stencil
    Matrix stencil(2, 1);
    stencil(0, 0) = 1.0 / std::sqrt(static_cast<double>(n));
    stencil(1, 0) = -1.0 / std::sqrt(static_cast<double>(n));
    out.f2 = tape.matmul(out.s, tape.constant(stencil));

    const Tape::Id f2t = tape.transpose(out.f2);
    const Tape::Id outer = tape.matmul(out.f2, f2t);

    if (cfg.mode == GapMode::rcut) {
        // grad(u,v) = f2_u^2 - f2_u f2_v
        Matrix ones_row(1, n, 1.0);
        const Tape::Id f2sq = tape.hadamard(out.f2, out.f2);
        const Tape::Id diag_part = tape.matmul(f2sq, tape.constant(ones_row));
        out.grad = tape.sub(diag_part, outer);
    } else {
        // 2 d'{f2^T D^{1/2} A f2} 1^T + D^{-1/2} f2 f2^T D^{-1/2}
        Matrix dhalf_a(n, n);
        Matrix inv_sqrt_dd(n, n);
        Matrix dprime_ones(n, n);
        for (std::size_t u = 0; u < n; ++u) {
            const double su = std::sqrt(deg[u]);
            for (std::size_t v = 0; v < n; ++v) {
                dhalf_a(u, v) = su * g.adjacency(u, v);
                inv_sqrt_dd(u, v) = 1.0 / (su * std::sqrt(deg[v]));
                dprime_ones(u, v) = -0.5 * std::pow(deg[u], -1.5);
            }
        }
        const Tape::Id q = tape.trace(tape.matmul(f2t, tape.matmul(tape.constant(dhalf_a), out.f2)));
        const Tape::Id term1 = tape.scalar_mul(tape.constant(dprime_ones), tape.scale(q, 2.0));
        const Tape::Id term2 = tape.hadamard(outer, tape.constant(inv_sqrt_dd));
        out.grad = tape.add(term1, term2);
    }

    Tape::Id step;
    if (cfg.learnable_mu) {
        const Tape::Id mu = tape.softplus(binding.at(prefix + ".mu_raw"));
        step = tape.scalar_mul(out.grad, mu);
    } else {
        step = tape.scale(out.grad, cfg.mu);
    }
    out.atilde = tape.clamp_min(tape.sub(tape.constant(g.adjacency), step), 0.0);

    const Tape::Id masked = tape.hadamard(out.atilde, tape.constant(support_mask(g.adjacency)));
    out.t = tape.scale(tape.add(masked, tape.transpose(masked)), 0.5);

    const CutLossNodes cut = cut_loss_nodes(tape, out.s, g.adjacency);
    out.loss_cut = cut.total;

    // lambda surrogate: Rayleigh quotient of f2 on the rewired adjacency,
    // plain (rcut) or degree-weighted (ncut), with a guarded denominator.
    // Row sums of A~ stand in for the rewired degrees.
    const Tape::Id quad_a = tape.trace(tape.matmul(f2t, tape.matmul(out.atilde, out.f2)));
    const Tape::Id f2sq_row = tape.transpose(tape.hadamard(out.f2, out.f2));
    const Tape::Id row_sums = tape.matmul(out.atilde, tape.constant(Matrix(n, 1, 1.0)));
    const Tape::Id quad_d = tape.trace(tape.matmul(f2sq_row, row_sums));
    const Tape::Id lnum = tape.sub(quad_d, quad_a);
    Tape::Id lden;
    if (cfg.mode == GapMode::rcut) {
        lden = guarded(tape, tape.trace(tape.matmul(f2t, out.f2)));
    } else {
        lden = guarded(tape, quad_d);
    }
    out.lambda = tape.scalar_div(lnum, lden);
    const Tape::Id gap_sq = tape.scale(tape.hadamard(out.lambda, out.lambda), cfg.alpha);
    const Tape::Id fro = tape.frobenius_norm(tape.sub(out.atilde, tape.constant(g.adjacency)));
    out.loss_fiedler = tape.add(fro, gap_sq);

    out.loss = tape.add(out.loss_cut, out.loss_fiedler);
    return out;
}

GapLayerOutput gap_layer_forward(const Graph& g, const ParameterSet& params,
                                 const GapLayerConfig& cfg) {
    const Graph gf = featured(g, cfg.mlp.in, "gap_layer_forward");
    Tape tape;
    Binding binding = bind_params(tape, params);
    const Tape::Id x = tape.constant(*gf.features);
    const GapLayerNodes nodes = gap_layer_nodes(tape, binding, "gap", cfg, x, gf);
    GapLayerOutput out;
    out.t = tape.value(nodes.t);
    out.atilde = tape.value(nodes.atilde);
    out.s = tape.value(nodes.s);
    out.grad = tape.value(nodes.grad);
    const Matrix& f2m = tape.value(nodes.f2);
    out.f2.assign(f2m.raw().begin(), f2m.raw().end());
    out.loss_cut = tape.scalar_value(nodes.loss_cut);
    out.loss_fiedler = tape.scalar_value(nodes.loss_fiedler);
    out.loss_gap = tape.scalar_value(nodes.loss);
    out.lambda_approx = tape.scalar_value(nodes.lambda);
    out.mu = cfg.learnable_mu
                 ? std::log1p(std::exp(params.at("gap.mu_raw")(0, 0)))
                 : cfg.mu;
    return out;
}

RewireTrainResult train_gap_layer(const std::vector<Graph>& graphs, const GapLayerConfig& cfg,
                                  const RewireTrainConfig& tc) {
    ParameterSet params = init_gap_params(cfg, tc.seed);
    return run_training(std::move(params), graphs, tc,
                        [&](Tape& tape, const Binding& binding, const Graph& g) {
                            const Graph gf = featured(g, cfg.mlp.in, "train_gap_layer");
                            const Tape::Id x = tape.constant(*gf.features);
                            return gap_layer_nodes(tape, binding, "gap", cfg, x, gf).loss;
                        });
}

}  // namespace sgr
