// Acceptance battery: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Tolerances are part of the contract, do not loosen.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgr/curvature.hpp"
#include "sgr/error.hpp"
#include "sgr/gnn.hpp"
#include "sgr/rewiring.hpp"
#include "sgr/sparsify.hpp"
#include "sgr/spectral.hpp"

namespace {

using namespace sgr;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

std::vector<Graph> fixture_graphs() {
    return {gen_named("P2"), gen_named("P3"), gen_named("K3"), gen_named("C4"),
            gen_named("barbell6")};
}

std::vector<Graph> random_corpus(std::size_t count) {
    std::vector<Graph> out;
    std::uint64_t seed = 1;
    while (out.size() < count) {
        std::size_t n = 4 + out.size() % 17;  // 4..20
        double p = n <= 8 ? 0.55 : 0.4;
        out.push_back(gen_er(n, p, seed++));
    }
    return out;
}

double quotient(const Matrix& z, const Matrix& l, const Matrix& d) {
    double num = trace(matmul(transpose(z), matmul(l, z)));
    double den = trace(matmul(transpose(z), matmul(d, z)));
    return num / den;
}

double lambda2_of_weights(const Matrix& w) {
    const std::size_t n = w.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            l(i, j) = -w(i, j);
            row += w(i, j);
        }
        l(i, i) = row;
    }
    return sym_eig(l).eigenvalues[1];
}

Matrix random_rotation(std::size_t k, Rng& rng) {
    Matrix q = Matrix::identity(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double th = rng.uniform(0.0, 6.283185307179586);
            Matrix g = Matrix::identity(k);
            g(i, i) = std::cos(th);
            g(j, j) = std::cos(th);
            g(i, j) = std::sin(th);
            g(j, i) = -std::sin(th);
            q = matmul(q, g);
        }
    return q;
}

Graph random_tree(std::size_t n, Rng& rng) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < n; ++i)
        edges.push_back({static_cast<std::size_t>(rng.below(i)), i, 1.0});
    return build_graph(n, edges);
}

// --- criterion 1: three resistance computations agree -----------------------

bool crit_resistance_oracles(std::string& detail) {
    auto t0 = Clock::now();
    std::vector<Graph> graphs = fixture_graphs();
    for (Graph& g : random_corpus(50)) graphs.push_back(std::move(g));

    double worst = 0.0;
    for (const Graph& g : graphs) {
        SpectralDecomposition dec = sym_eig(laplacian(g));
        Matrix lp = laplacian_pinv(dec);
        CTEmbedding cte = spectral_cte(g);
        Matrix d2 = cdist(transpose(cte.z), true);
        for (std::size_t u = 0; u < g.n; ++u)
            for (std::size_t v = u + 1; v < g.n; ++v) {
                double r_quad = lp(u, u) + lp(v, v) - 2.0 * lp(u, v);
                double r_eig = 0.0;
                for (std::size_t i = 0; i < g.n; ++i) {
                    if (dec.eigenvalues[i] <= 1e-9) continue;
                    double diff = dec.eigenvectors(u, i) - dec.eigenvectors(v, i);
                    r_eig += diff * diff / dec.eigenvalues[i];
                }
                double r_emb = d2(u, v) / cte.vol;
                double hi = std::max({r_quad, r_eig, r_emb});
                double lo = std::min({r_quad, r_eig, r_emb});
                worst = std::max(worst, hi - lo);
            }
    }

    Matrix r_k3 = resistance_matrix(gen_named("K3")).resistance;
    Matrix r_c4 = resistance_matrix(gen_named("C4")).resistance;
    Matrix r_p3 = resistance_matrix(gen_named("P3")).resistance;
    bool fixtures_ok = std::abs(r_k3(0, 1) - 2.0 / 3.0) <= 1e-7 &&
                       std::abs(r_c4(0, 1) - 0.75) <= 1e-7 &&
                       std::abs(r_c4(0, 2) - 1.0) <= 1e-7 && std::abs(r_p3(0, 2) - 2.0) <= 1e-7;

    double secs = seconds_since(t0);
    detail = "max spread " + fmt(worst, 3) + " over " + std::to_string(graphs.size()) +
             " graphs, fixtures " + (fixtures_ok ? "match" : "MISMATCH") + ", " + fmt(secs, 3) +
             "s";
    return worst <= 1e-7 && fixtures_ok && secs < 30.0;
}

// --- criterion 2: Foster identity -------------------------------------------

bool crit_foster(std::string& detail) {
    std::vector<Graph> graphs = fixture_graphs();
    for (Graph& g : random_corpus(50)) graphs.push_back(std::move(g));
    double worst = 0.0;
    for (const Graph& g : graphs) {
        Matrix r = resistance_matrix(g).resistance;
        double total = 0.0;
        for (const Edge& e : edge_list(g)) total += r(e.u, e.v);
        worst = std::max(worst, std::abs(total - double(g.n - 1)));
    }
    detail = "max |sum R - (n-1)| = " + fmt(worst, 3) + " over " +
             std::to_string(graphs.size()) + " graphs";
    return worst <= 1e-7;
}

// --- criterion 3: degree-proximity bounds ------------------------------------

bool crit_degree_bounds(std::string& detail) {
    std::vector<Graph> graphs = fixture_graphs();
    for (Graph& g : random_corpus(50)) graphs.push_back(std::move(g));
    bool loose_all = true, refined_le_loose = true;
    for (const Graph& g : graphs) {
        if (g.n < 2) continue;
        BoundsReport rep = bounds_report(g);
        loose_all = loose_all && rep.all_loose_hold;
        for (const PairBound& pb : rep.pairs)
            refined_le_loose = refined_le_loose && pb.rhs_refined <= pb.rhs_loose + 1e-12;
    }

    BoundsReport k3 = bounds_report(gen_named("K3"));
    bool k3_ok = k3.all_loose_hold && k3.all_refined_hold;
    for (const PairBound& pb : k3.pairs)
        k3_ok = k3_ok && std::abs(pb.lhs - 1.0 / 3.0) <= 1e-9 &&
                std::abs(pb.rhs_loose - 2.0 / 3.0) <= 1e-9;

    detail = std::string("loose hold ") + (loose_all ? "everywhere" : "VIOLATED") +
             ", refined <= loose " + (refined_le_loose ? "everywhere" : "VIOLATED") +
             ", K3 instance lhs 1/3 rhs 2/3 " + (k3_ok ? "matches" : "MISMATCH");
    return loose_all && refined_le_loose && k3_ok;
}

// --- criterion 4: symmetrized rcut gradient vs finite differences -----------

bool crit_gap_gradient_fd(std::string& detail) {
    int accepted = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; accepted < 20 && seed < 200; ++seed) {
        Graph g = gen_er(6 + seed % 9, 0.45, 2000 + seed);
        auto evals = sym_eig(laplacian(g)).eigenvalues;
        if (evals[2] - evals[1] < 1e-2) continue;  // too degenerate for central differences
        Matrix fd;
        try {
            fd = fd_gap_gradient(g, false, 1e-5);
        } catch (const Error&) {
            continue;  // eigenvalue crossing, not a simple gap
        }
        ++accepted;
        FiedlerPair f = fiedler_exact(g, false);
        Matrix grad = grad_rcut(f.vector);
        Matrix sym = grad + transpose(grad);
        for (const Edge& e : edge_list(g)) {
            // floor the denominator: near-zero entries only carry solver noise
            double a = sym(e.u, e.v), b = fd(e.u, e.v);
            worst = std::max(worst, std::abs(a - b) / std::max(1e-2, std::abs(b)));
        }
    }

    FiedlerPair f2 = fiedler_exact(gen_named("P2"), false);
    Matrix grad = grad_rcut(f2.vector);
    double p2 = grad(0, 1) + grad(1, 0);
    bool p2_ok = std::abs(p2 - 2.0) <= 1e-8;

    detail = "max rel err " + fmt(worst, 3) + " over " + std::to_string(accepted) +
             " simple-gap graphs, P2 closed form " + fmt(p2, 10);
    return accepted >= 20 && worst <= 1e-4 && p2_ok;
}

// --- criterion 5: exact block sensitivities ----------------------------------

bool crit_block_gradients(std::string& detail) {
    bool ok = true;
    for (std::size_t n : {std::size_t(4), std::size_t(16)}) {
        std::vector<double> f2(n);
        for (std::size_t i = 0; i < n; ++i)
            f2[i] = (i < n / 2 ? 1.0 : -1.0) / std::sqrt(double(n));
        Matrix grad = grad_rcut(f2);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                if (u == v) continue;
                bool same = (u < n / 2) == (v < n / 2);
                double want = same ? 0.0 : 2.0 / double(n);
                ok = ok && grad(u, v) == want && grad(u, v) == grad(v, u);
            }
    }
    detail = std::string("hard assignments, n in {4,16}: intra 0 and inter 2/n ") +
             (ok ? "exact" : "NOT exact");
    return ok;
}

// --- criterion 6: autodiff soundness -----------------------------------------

Matrix randm(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(-0.9, 0.9);
    return m;
}

// values kept away from 0 so clamp and norm kinks stay out of fd range
Matrix randm_away(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = (rng.below(2) ? 1.0 : -1.0) * rng.uniform(0.3, 0.9);
    return m;
}

bool crit_autodiff(std::string& detail) {
    Rng rng(17);
    double worst = 0.0;
    auto check = [&](const char* /*name*/, ParameterSet params, const LossBuilder& build) {
        worst = std::max(worst, grad_check(build, params, 1e-5));
    };
    auto one = [](Matrix m) {
        ParameterSet p;
        p.add("a", std::move(m));
        return p;
    };
    auto two = [](Matrix ma, Matrix mb) {
        ParameterSet p;
        p.add("a", std::move(ma));
        p.add("b", std::move(mb));
        return p;
    };

    check("matmul", two(randm(3, 4, rng), randm(4, 2, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.matmul(b.at("a"), b.at("b")));
    });
    check("add", two(randm(3, 4, rng), randm(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.add(b.at("a"), b.at("b")));
    });
    check("add bias", two(randm(3, 4, rng), randm(1, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.add(b.at("a"), b.at("b")));
    });
    check("sub", two(randm(3, 4, rng), randm(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.sub(b.at("a"), b.at("b")));
    });
    check("hadamard", two(randm(3, 4, rng), randm(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.hadamard(b.at("a"), b.at("b")));
    });
    check("tanh", one(randm(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.tanh(b.at("a")));
    });
    check("row_softmax", two(randm(3, 4, rng), randm(4, 3, rng)),
          [](Tape& t, const Binding& b) {
              return t.trace(t.matmul(t.row_softmax(b.at("a")), b.at("b")));
          });
    check("trace", one(randm(4, 4, rng)), [](Tape& t, const Binding& b) {
        return t.trace(t.hadamard(b.at("a"), b.at("a")));
    });
    check("frobenius", one(randm_away(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(b.at("a"));
    });
    check("scalar_div", two(randm(3, 3, rng), randm_away(2, 2, rng)),
          [](Tape& t, const Binding& b) {
              return t.scalar_div(t.trace(t.hadamard(b.at("a"), b.at("a"))),
                                  t.frobenius_norm(b.at("b")));
          });
    check("scalar_mul", two(randm(3, 4, rng), randm(2, 2, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(
            t.scalar_mul(b.at("a"), t.trace(t.hadamard(b.at("b"), b.at("b")))));
    });
    check("cdist sq", one(randm(4, 3, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.cdist(b.at("a"), true));
    });
    {
        Matrix mask(4, 4, 1.0);
        for (std::size_t i = 0; i < 4; ++i) mask(i, i) = 0.0;
        check("cdist", one(randm_away(4, 3, rng)), [mask](Tape& t, const Binding& b) {
            return t.frobenius_norm(t.hadamard(t.cdist(b.at("a"), false), t.constant(mask)));
        });
    }
    check("transpose", one(randm(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.transpose(b.at("a")));
    });
    check("scale", one(randm(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.scale(b.at("a"), 1.7));
    });
    check("clamp_min", one(randm_away(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.clamp_min(b.at("a"), 0.1));
    });
    check("softplus", one(randm(3, 4, rng)), [](Tape& t, const Binding& b) {
        return t.frobenius_norm(t.softplus(b.at("a")));
    });
    check("softmax_xent", one(randm(1, 5, rng)), [](Tape& t, const Binding& b) {
        return t.softmax_xent(b.at("a"), 2);
    });
    double worst_ops = worst;

    // composite losses through the layer builders
    Graph g = with_degree_features(gen_er(7, 0.5, 11));
    CTLayerConfig ccfg;
    ccfg.mlp = {1, 6, 5, Head::tanh_head};
    {
        ParameterSet p = init_ct_params(ccfg, 3);
        LossBuilder b = [&](Tape& t, const Binding& bind) {
            return ct_layer_nodes(t, bind, "ct", ccfg, t.constant(*g.features), g).loss;
        };
        worst = std::max(worst, grad_check(b, p, 1e-5));
    }
    for (GapMode mode : {GapMode::rcut, GapMode::ncut}) {
        GapLayerConfig gcfg;
        gcfg.mlp = {1, 6, 2, Head::softmax_head};
        gcfg.mode = mode;
        gcfg.mp_rounds = mode == GapMode::rcut ? 3 : 0;  // cover the smoothed path too
        ParameterSet p = init_gap_params(gcfg, 5);
        LossBuilder cut = [&](Tape& t, const Binding& bind) {
            return gap_layer_nodes(t, bind, "gap", gcfg, t.constant(*g.features), g).loss_cut;
        };
        LossBuilder fied = [&](Tape& t, const Binding& bind) {
            return gap_layer_nodes(t, bind, "gap", gcfg, t.constant(*g.features), g)
                .loss_fiedler;
        };
        ParameterSet p2 = p;
        worst = std::max(worst, grad_check(cut, p, 1e-5));
        worst = std::max(worst, grad_check(fied, p2, 1e-5));
    }

    detail = "max grad_check rel err " + fmt(worst, 3) + " (ops " + fmt(worst_ops, 3) +
             ", losses included)";
    return worst <= 1e-4;
}

// --- criterion 7: CT-layer behavior ------------------------------------------

bool crit_ct_layer(std::string& detail) {
    CTLayerConfig cfg;

    // (a) bridge saliency on held-out barbell6 after corpus training
    std::vector<Graph> corpus;
    for (std::size_t i = 0; i < 24; ++i) corpus.push_back(gen_er(10 + i % 5, 0.4, 40 + i));
    RewireTrainConfig tc;
    tc.epochs = 120;
    tc.batch = 8;
    tc.seed = 1;
    RewireTrainResult trained = train_ct_embedder(corpus, cfg, tc);

    Graph b6 = gen_named("barbell6");
    CTLayerOutput out = ct_layer_forward(b6, trained.params, cfg);
    std::vector<Edge> edges = edge_list(b6);
    double bridge_w = out.t(2, 3);
    std::size_t above = 0;
    for (const Edge& e : edges)
        if (out.t(e.u, e.v) > bridge_w) ++above;
    std::size_t rank = above + 1;
    bool bridge_ok = rank <= 2;

    // (b) rotation invariance of the loss
    Rng rng(23);
    Matrix l = laplacian(b6), d = degree_matrix(b6);
    Matrix z = randm(6, 5, rng);
    double base = ct_loss(z, l, d);
    double rot_err = 0.0;
    for (int k = 0; k < 3; ++k) {
        double rotated = ct_loss(matmul(z, random_rotation(5, rng)), l, d);
        rot_err = std::max(rot_err, std::abs(rotated - base));
    }
    bool rot_ok = rot_err <= 1e-9;

    // (c) single-graph overfit quotient vs the spectral embedding
    bool overfit_ok = true;
    std::string qdetail;
    for (std::uint64_t seed : {std::uint64_t(5), std::uint64_t(7)}) {
        Graph g = gen_er(seed == 5 ? 12 : 10, 0.4, seed);
        RewireTrainConfig oc;
        oc.epochs = 500;
        oc.batch = 1;
        oc.seed = 3;
        oc.adam.lr = 5e-3;
        RewireTrainResult fit = train_ct_embedder({g}, cfg, oc);
        CTLayerOutput o = ct_layer_forward(g, fit.params, cfg);
        Matrix lg = laplacian(g), dg = degree_matrix(g);
        double q_learned = quotient(o.z, lg, dg);
        double q_spec = quotient(transpose(spectral_cte(g).z), lg, dg);
        overfit_ok = overfit_ok && q_learned <= 1.2 * q_spec;
        qdetail += " " + fmt(q_learned, 4) + "/" + fmt(q_spec, 4);
    }

    detail = "bridge rank " + std::to_string(rank) + " of " + std::to_string(edges.size()) +
             " (weight " + fmt(bridge_w, 3) + ", top-2 " + (bridge_ok ? "yes" : "no") +
             "), rotation err " + fmt(rot_err, 3) + ", overfit quotient/spectral" + qdetail;
    return bridge_ok && rot_ok && overfit_ok;
}

// --- criterion 8: GAP-layer behavior -----------------------------------------

bool crit_gap_layer(std::string& detail) {
    GapLayerConfig cfg;
    cfg.mode = GapMode::rcut;
    cfg.alpha = 0.1;
    cfg.mp_rounds = 8;
    std::vector<Graph> corpus;
    for (std::size_t i = 0; i < 30; ++i)
        corpus.push_back(gen_sbm(15, 15, 0.8, 0.05, 100 + i).graph);
    RewireTrainConfig tc;
    tc.epochs = 80;
    tc.batch = 8;
    tc.seed = 2;
    RewireTrainResult trained = train_gap_layer(corpus, cfg, tc);

    auto reduction = [&](const Graph& g, bool& strict) {
        GapLayerOutput out = gap_layer_forward(g, trained.params, cfg);
        double before = lambda2_of_weights(g.adjacency);
        double after = lambda2_of_weights(out.t);
        strict = after < before;
        return (before - after) / before;
    };

    std::size_t strict_count = 0;
    double mean_sbm = 0.0, mean_er = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
        bool strict = false;
        mean_sbm += reduction(gen_sbm(15, 15, 0.8, 0.05, 500 + i).graph, strict);
        if (strict) ++strict_count;
    }
    mean_sbm /= 20.0;
    for (std::size_t i = 0; i < 20; ++i) {
        bool strict = false;
        mean_er += reduction(gen_er(30, 0.2, 700 + i), strict);
    }
    mean_er /= 20.0;

    detail = "strict lambda2 drop on " + std::to_string(strict_count) +
             "/20 held-out SBM, mean relative reduction sbm " + fmt(mean_sbm, 4) + " vs er " +
             fmt(mean_er, 4);
    return strict_count >= 16 && mean_sbm > mean_er;
}

// --- criterion 9: sparsifier --------------------------------------------------

bool crit_sparsifier(std::string& detail) {
    double worst_lev = 0.0;
    for (const Graph& g : fixture_graphs()) {
        ProjectedIncidence pi = projected_incidence(g);
        Matrix r = resistance_matrix(g).resistance;
        for (std::size_t e = 0; e < pi.edges.size(); ++e) {
            double norm2 = 0.0;
            for (std::size_t j = 0; j < pi.v.cols(); ++j) norm2 += pi.v(e, j) * pi.v(e, j);
            worst_lev = std::max(worst_lev,
                                 std::abs(norm2 - r(pi.edges[e].u, pi.edges[e].v)));
            worst_lev = std::max(worst_lev, std::abs(norm2 - pi.leverage[e]));
        }
    }
    bool lev_ok = worst_lev <= 1e-7;

    bool order_ok = true;
    std::vector<Edge> k10_edges;
    for (std::size_t u = 0; u < 10; ++u)
        for (std::size_t v = u + 1; v < 10; ++v) k10_edges.push_back({u, v, 1.0});
    std::vector<std::pair<Graph, double>> greedy_cases = {
        {build_graph(10, k10_edges), 0.35},
        {gen_er(12, 0.5, 9), 0.9},
        {gen_er(16, 0.35, 2), 0.5},
        {gen_named("barbell6"), 0.9},
    };
    for (const auto& [g, eps] : greedy_cases) {
        SparsifyResult res = greedy_sparsify(g, eps);
        for (std::size_t i = 0; i + 1 < res.kept_r.size(); ++i)
            order_ok = order_ok && res.kept_r[i] >= res.kept_r[i + 1] - 1e-12;
    }

    Graph c4 = gen_named("C4");
    Matrix l = laplacian(c4);
    Matrix mean(4, 4);
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        mean += laplacian(sample_sparsify(c4, 0.6, seed).sparsified);
    mean *= 1.0 / 200.0;
    double bias = frobenius_norm(mean - l) / frobenius_norm(l);
    bool unbiased = bias <= 0.05;

    Graph g9 = gen_er(9, 0.5, 3);
    SimilarityReport sim = spectral_similarity_report(g9, g9, 0.5, 16, 1);
    bool identity_ok =
        sim.min_ratio == 1.0 && sim.max_ratio == 1.0 && sim.fraction_in_range == 1.0;

    detail = "max leverage err " + fmt(worst_lev, 3) + ", greedy order " +
             (order_ok ? "descending" : "NOT descending") + ", sampling bias " + fmt(bias, 4) +
             ", identity ratios " + (identity_ok ? "exactly 1" : "NOT 1");
    return lev_ok && order_ok && unbiased && identity_ok;
}

// --- criterion 10: curvature ---------------------------------------------------

bool crit_curvature(std::string& detail) {
    std::vector<Graph> graphs = fixture_graphs();
    for (Graph& g : random_corpus(20)) graphs.push_back(std::move(g));
    bool bounds_ok = true;
    for (const Graph& g : graphs) {
        CurvatureReport rep = curvature_bounds_check(g);
        bounds_ok = bounds_ok && rep.all_bounds_hold && rep.unbounded_edges == 0;
    }

    Rng rng(31);
    std::vector<Graph> trees = {gen_named("P2"), gen_named("P3")};
    for (int i = 0; i < 8; ++i) trees.push_back(random_tree(4 + rng.below(7), rng));
    double worst_tree = 0.0;
    for (const Graph& t : trees) {
        CurvatureReport rep = curvature_bounds_check(t);
        for (const EdgeCurvature& e : rep.edges)
            worst_tree = std::max(worst_tree, std::abs(e.kappa - e.lower));
    }
    bool trees_ok = worst_tree <= 1e-9;

    auto kappa_of = [](const Graph& g) { return curvature_bounds_check(g).edges[0].kappa; };
    double k_p2 = kappa_of(gen_named("P2"));
    double k_k3 = kappa_of(gen_named("K3"));
    double k_c4 = kappa_of(gen_named("C4"));
    bool fixtures_ok = std::abs(k_p2 - 2.0) <= 1e-9 && std::abs(k_k3 - 2.0) <= 1e-9 &&
                       std::abs(k_c4 - 4.0 / 3.0) <= 1e-9;

    detail = std::string("bounds ") + (bounds_ok ? "hold" : "VIOLATED") + " on " +
             std::to_string(graphs.size()) + " graphs, tree lower-bound gap " +
             fmt(worst_tree, 3) + ", kappa(P2,K3,C4) = " + fmt(k_p2, 4) + "," + fmt(k_k3, 4) +
             "," + fmt(k_c4, 4);
    return bounds_ok && trees_ok && fixtures_ok;
}

// --- criterion 11: synthetic classification -----------------------------------

bool crit_synthetic_classification(std::string& detail) {
    auto t0 = Clock::now();
    ExperimentResult r = experiment_synthetic({0, 1, 2}, 60, 200);
    double secs = seconds_since(t0);

    double sbm_base = r.table.at("sbm").at("baseline").mean;
    double sbm_gapn = r.table.at("sbm").at("gap-ncut").mean;
    double er_base = r.table.at("er").at("baseline").mean;
    double er_ct = r.table.at("er").at("ct").mean;
    double er_gapn = r.table.at("er").at("gap-ncut").mean;

    bool gap_beats_base = sbm_gapn >= sbm_base;
    bool er_ok = er_ct >= er_base - 2.0 && er_gapn >= er_base - 2.0;
    bool base_ok = sbm_base > 55.0;
    bool time_ok = secs < 900.0;

    detail = "sbm baseline " + fmt(sbm_base, 4) + " gap-ncut " + fmt(sbm_gapn, 4) +
             "; er baseline " + fmt(er_base, 4) + " ct " + fmt(er_ct, 4) + " gap-ncut " +
             fmt(er_gapn, 4) + "; " + fmt(secs, 1) + "s";
    return gap_beats_base && er_ok && base_ok && time_ok;
}

// --- criterion 12: CLI reproducibility -----------------------------------------

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun run_shell(const std::string& command) {
    CliRun run;
    std::string wrapped = "( " + command + " ) 2>/dev/null";
    FILE* pipe = popen(wrapped.c_str(), "r");
    if (!pipe) return run;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) run.out.append(buf, got);
    int status = pclose(pipe);
    run.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return run;
}

bool crit_cli_reproducibility(std::string& detail) {
    const std::string cli = SGR_CLI_PATH;
    namespace fs = std::filesystem;
    fs::path tmp = "acc12_tmp";
    fs::create_directories(tmp);
    std::string ck = (tmp / "ct.ckpt").string();

    auto pipe_named = [&](const std::string& rest) {
        return cli + " gen named --name barbell6 | " + cli + " " + rest;
    };
    auto pipe_er = [&](const std::string& rest) {
        return cli + " gen er --n 12 --p 0.4 --seed 7 | " + cli + " " + rest;
    };

    std::vector<std::string> commands = {
        cli + " gen er --n 12 --p 0.4 --seed 7",
        cli + " gen sbm --n1 6 --n2 6 --p 0.7 --q 0.1 --seed 3",
        cli + " gen named --name barbell6",
        pipe_named("embed -"),
        pipe_named("bounds -"),
        pipe_named("rewire ct - --seed 5"),
        pipe_named("rewire gap - --seed 5 --mode ncut"),
        pipe_er("sparsify - --eps 0.9 --method greedy"),
        pipe_er("sparsify - --eps 0.9 --method sample --seed 3"),
        pipe_named("curvature -"),
        cli + " train ct --synthetic er --count 4 --epochs 2 --seed 1 --ckpt-out " + ck,
        pipe_named("embed - --learned " + ck),
        pipe_named("rewire ct - --ckpt " + ck),
        cli + " train gap --synthetic sbm --count 4 --epochs 2 --seed 1 --mode rcut"
              " --alpha 0.1 --mp-rounds 4",
        cli + " train gnn --synthetic sbm --count 6 --epochs 1 --seed 2 --kind baseline",
        cli + " experiment synthetic --seeds 0 --epochs 1 --count 6",
    };

    std::size_t checked = 0;
    std::string failure;
    for (const std::string& cmd : commands) {
        CliRun first = run_shell(cmd);
        CliRun second = run_shell(cmd);
        if (first.status != 0 || second.status != 0) {
            failure = "nonzero exit: " + cmd;
            break;
        }
        if (first.out.empty() || first.out != second.out) {
            failure = "output differs: " + cmd;
            break;
        }
        ++checked;
    }
    fs::remove_all(tmp);

    detail = std::to_string(checked) + "/" + std::to_string(commands.size()) +
             " commands byte-identical" + (failure.empty() ? "" : ", " + failure);
    return failure.empty();
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {"resistance-oracles", crit_resistance_oracles},
        {"foster-identity", crit_foster},
        {"degree-bounds", crit_degree_bounds},
        {"gap-gradient-fd", crit_gap_gradient_fd},
        {"block-gradients", crit_block_gradients},
        {"autodiff", crit_autodiff},
        {"ct-layer", crit_ct_layer},
        {"gap-layer", crit_gap_layer},
        {"sparsifier", crit_sparsifier},
        {"curvature", crit_curvature},
        {"synthetic-classification", crit_synthetic_classification},
        {"cli-reproducibility", crit_cli_reproducibility},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool pass = false;
        try {
            pass = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!pass) ++failures;
        std::printf("[%s] %02zu %-26s %s\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
