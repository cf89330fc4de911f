#include <cmath>
#include <vector>

#include "doctest.h"
#include "sgr/generators.hpp"
#include "sgr/gnn.hpp"
#include "test_util.hpp"

using namespace sgr;

namespace {

Graph labeled(Graph g, int label) {
    Graph out = with_degree_features(std::move(g));
    out.label = label;
    return out;
}

}  // namespace

TEST_CASE("gcn_conv applies both transforms and the chosen activation") {
    Matrix t = Matrix::identity(2);
    Matrix x(2, 2);
    x(0, 0) = 1.0; x(0, 1) = -2.0; x(1, 0) = 0.5; x(1, 1) = 0.25;
    Matrix w = Matrix::identity(2);
    Matrix ws = Matrix::identity(2);
    Matrix b(1, 2);
    b(0, 0) = 0.1; b(0, 1) = 0.1;

    Tape tape;
    auto out = gcn_conv(tape, tape.constant(t), tape.constant(x), tape.constant(w),
                        tape.constant(ws), tape.constant(b), Activation::relu);
    Matrix v = tape.value(out);
    // identity support doubles x, then the bias shifts and relu clips
    CHECK(v(0, 0) == doctest::Approx(2.1));
    CHECK(v(0, 1) == 0.0);  // 2 * (-2) + 0.1 clipped
    CHECK(v(1, 1) == doctest::Approx(0.6));

    Tape tape2;
    auto out2 = gcn_conv(tape2, tape2.constant(t), tape2.constant(x), tape2.constant(w),
                         tape2.constant(ws), tape2.constant(b), Activation::tanh);
    CHECK(tape2.value(out2)(0, 0) == doctest::Approx(std::tanh(2.1)));
}

TEST_CASE("rewired supports must stay inside the adjacency") {
    Graph g = gen_named("C4");
    Matrix ok = g.adjacency * 0.5;
    check_rewired_support(ok, g.adjacency);  // no throw
    expect_error([&] { check_rewired_support(Matrix::identity(4), g.adjacency); },
                 "rewired support: entry (");
    expect_error([&] { check_rewired_support(Matrix(3, 3), g.adjacency); },
                 "rewired support");
}

TEST_CASE("mincut_pool with the identity assignment is a no-op") {
    Graph g = gen_named("barbell6");
    Matrix x(6, 3);
    Rng rng(2);
    for (double& v : x.raw()) v = rng.uniform(-1.0, 1.0);

    PoolResult r = mincut_pool(g.adjacency, x, Matrix::identity(6));
    check_close(r.a_pooled, g.adjacency, 1e-12);
    check_close(r.x_pooled, x, 1e-12);
    CHECK(std::isfinite(r.cut_loss));
    CHECK(std::isfinite(r.orth_loss));

    Matrix s(6, 2);
    for (std::size_t i = 0; i < 6; ++i) s(i, i < 3 ? 0 : 1) = 1.0;
    PoolResult half = mincut_pool(g.adjacency, x, s);
    CHECK(half.a_pooled.rows() == 2);
    CHECK(half.x_pooled.rows() == 2);
    CHECK(half.x_pooled.cols() == 3);
    // only the bridge crosses the blocks
    CHECK(half.a_pooled(0, 1) == doctest::Approx(1.0));
    CHECK(half.a_pooled(0, 0) == doctest::Approx(6.0));

    expect_error([&] { mincut_pool(Matrix(3, 4), x, s); }, "mincut_pool");
}

TEST_CASE("build_model registers the expected parameters") {
    ModelSpec spec;
    ParameterSet base = build_model(spec, 1);
    for (const char* name : {"lin.w", "lin.b", "conv1.w", "conv1.ws", "conv1.b", "pool.w",
                             "pool.b", "conv2.w", "conv2.ws", "conv2.b", "cls.w", "cls.b"})
        CHECK(base.has(name));
    CHECK(!base.has("ct.w1"));

    spec.kind = ModelKind::ct;
    CHECK(build_model(spec, 1).has("ct.w1"));
    spec.kind = ModelKind::gap;
    CHECK(build_model(spec, 1).has("gap.w1"));

    ModelSpec bad;
    bad.classes = 1;
    expect_error([&] { build_model(bad, 1); }, "need at least two classes");
}

TEST_CASE("model_forward wires the loss terms by kind") {
    Graph g = labeled(gen_sbm(6, 6, 0.8, 0.1, 3).graph, 1);

    for (ModelKind kind : {ModelKind::baseline, ModelKind::ct, ModelKind::gap}) {
        ModelSpec spec;
        spec.kind = kind;
        spec.k_pool = 4;
        Tape tape;
        Binding binding = bind_params(tape, build_model(spec, 5));
        ModelForward f = model_forward(tape, binding, spec, g);

        CHECK(tape.value(f.logits).rows() == 1);
        CHECK(tape.value(f.logits).cols() == 2);
        double loss = tape.scalar_value(f.loss);
        double ce = tape.scalar_value(f.ce);
        double aux = tape.scalar_value(f.aux);
        CHECK(std::isfinite(loss));
        if (kind == ModelKind::baseline) {
            CHECK(f.rewire_loss == -1);
            CHECK(loss == doctest::Approx(ce + aux).epsilon(1e-10));
        } else {
            REQUIRE(f.rewire_loss != -1);
            double rl = tape.scalar_value(f.rewire_loss);
            CHECK(loss == doctest::Approx(ce + aux + rl).epsilon(1e-10));
            // the learned support respects A off the diagonal
            Matrix t = tape.value(f.t);
            for (std::size_t u = 0; u < g.n; ++u)
                for (std::size_t v = 0; v < g.n; ++v)
                    if (g.adjacency(u, v) == 0.0) CHECK(t(u, v) == 0.0);
        }

        // rewire loss can be dropped from the objective
        Tape tape2;
        Binding binding2 = bind_params(tape2, build_model(spec, 5));
        ModelForward f2 = model_forward(tape2, binding2, spec, g, false);
        CHECK(tape2.scalar_value(f2.loss) ==
              doctest::Approx(tape2.scalar_value(f2.ce) + tape2.scalar_value(f2.aux))
                  .epsilon(1e-10));
    }

    Graph unlabeled = with_degree_features(gen_named("C4"));
    ModelSpec spec;
    Tape tape;
    Binding binding = bind_params(tape, build_model(spec, 1));
    expect_error([&] { model_forward(tape, binding, spec, unlabeled); },
                 "model_forward: graph has no label");
}

TEST_CASE("full model gradients pass grad_check with a smooth activation") {
    Graph g = labeled(gen_sbm(4, 4, 0.9, 0.2, 7).graph, 0);

    for (ModelKind kind : {ModelKind::baseline, ModelKind::ct, ModelKind::gap}) {
        ModelSpec spec;
        spec.kind = kind;
        spec.hidden = 6;
        spec.k_pool = 3;
        spec.conv_activation = Activation::tanh;  // keeps the loss differentiable everywhere
        ParameterSet params = build_model(spec, 11);

        Tape tape;
        Binding binding = bind_params(tape, params);
        ModelForward f = model_forward(tape, binding, spec, g);
        tape.backward(f.loss);
        GradMap grads = collect_grads(tape, binding);

        // deep compositions have near-zero gradient entries; skip differences
        // below the central-difference cancellation floor
        const double h = 1e-5;
        const double eps = 2.220446049250313e-16;
        const double noise = 64.0 * eps * std::abs(tape.scalar_value(f.loss)) / h;
        double worst = 0.0;
        for (auto& [name, entry] : params.entries) {
            for (std::size_t i = 0; i < entry.value.size(); ++i) {
                double keep = entry.value.raw()[i];
                auto eval = [&](double x) {
                    entry.value.raw()[i] = x;
                    Tape t;
                    Binding b = bind_params(t, params);
                    return t.scalar_value(model_forward(t, b, spec, g).loss);
                };
                double num = (eval(keep + h) - eval(keep - h)) / (2.0 * h);
                entry.value.raw()[i] = keep;
                double ana = grads.at(name).raw()[i];
                if (std::abs(ana - num) <= noise) continue;
                worst = std::max(worst,
                                 std::abs(ana - num) / std::max(1e-8, std::abs(ana) + std::abs(num)));
            }
        }
        INFO("kind " << static_cast<int>(kind));
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("synthetic datasets are balanced, sized and deterministic") {
    auto sbm = synthetic_sbm_dataset(3, 20);
    auto er = synthetic_er_dataset(3, 20);
    REQUIRE(sbm.size() == 20);
    REQUIRE(er.size() == 20);

    for (const auto& set : {sbm, er}) {
        std::size_t zeros = 0;
        for (const Graph& g : set) {
            REQUIRE(g.label.has_value());
            zeros += *g.label == 0;
            CHECK(g.n >= 20);
            CHECK(g.n <= 40);
            CHECK(!g.features.has_value());  // degree features are injected at training time
            CHECK(is_connected(g));
        }
        CHECK(zeros == 10);
    }

    auto again = synthetic_sbm_dataset(3, 20);
    for (std::size_t i = 0; i < 20; ++i)
        CHECK(max_abs_diff(sbm[i].adjacency, again[i].adjacency) == 0.0);
}

TEST_CASE("training is deterministic and can memorize a small corpus") {
    auto data = synthetic_sbm_dataset(1, 16);
    ModelSpec spec;  // baseline
    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.batch = 8;
    cfg.seed = 4;

    TrainOutput a = train_gnn(spec, data, cfg);
    TrainOutput b = train_gnn(spec, data, cfg);
    REQUIRE(a.metrics.train_loss.size() == 40);
    CHECK(a.metrics.train_loss == b.metrics.train_loss);
    CHECK(a.metrics.train_accuracy == b.metrics.train_accuracy);
    CHECK(a.metrics.test_accuracy == b.metrics.test_accuracy);
    CHECK(a.metrics.train_size == 14);
    CHECK(a.metrics.test_size == 2);
    CHECK(a.metrics.train_loss.back() < a.metrics.train_loss.front());
    CHECK(a.metrics.train_accuracy >= 0.75);

    // confusion rows add up to the per-class test counts
    double total = 0;
    for (double v : a.metrics.confusion.raw()) total += v;
    CHECK(total == doctest::Approx(double(a.metrics.test_size)));

    double acc = evaluate_accuracy(spec, a.params, data);
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);

    expect_error([&] { train_gnn(spec, {}, cfg); }, "train_gnn: empty dataset");
    expect_error([&] { evaluate_accuracy(spec, a.params, {}); }, "evaluate_accuracy: empty set");
}

TEST_CASE("rewired kinds train end to end") {
    auto data = synthetic_sbm_dataset(2, 8);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.batch = 4;
    cfg.seed = 9;
    cfg.test_fraction = 0.0;

    for (ModelKind kind : {ModelKind::ct, ModelKind::gap}) {
        ModelSpec spec;
        spec.kind = kind;
        spec.gap_mode = GapMode::ncut;
        TrainOutput out = train_gnn(spec, data, cfg);
        CHECK(out.metrics.train_loss.size() == 3);
        for (double l : out.metrics.train_loss) CHECK(std::isfinite(l));
    }
}

TEST_CASE("experiment table covers both corpora and all four models") {
    ExperimentResult r = experiment_synthetic({0}, 2, 14);
    CHECK(r.datasets == std::vector<std::string>{"sbm", "er"});
    CHECK(r.models ==
          std::vector<std::string>{"baseline", "ct", "gap-rcut", "gap-ncut"});
    CHECK(r.graphs_per_dataset == 14);
    CHECK(r.epochs == 2);
    CHECK(!r.scale_note.empty());
    for (const auto& ds : r.datasets)
        for (const auto& m : r.models) {
            const ExperimentCell& cell = r.table.at(ds).at(m);
            REQUIRE(cell.runs.size() == 1);
            CHECK(cell.mean == doctest::Approx(cell.runs[0]));
            CHECK(cell.stddev == 0.0);
            CHECK(cell.mean >= 0.0);
            CHECK(cell.mean <= 100.0);
        }
    expect_error([] { experiment_synthetic({}, 1, 4); }, "experiment: need at least one seed");
}
