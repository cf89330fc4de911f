#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgr/curvature.hpp"
#include "sgr/error.hpp"
#include "sgr/generators.hpp"
#include "sgr/gnn.hpp"
#include "sgr/io.hpp"
#include "sgr/rewiring.hpp"
#include "sgr/sparsify.hpp"
#include "sgr/spectral.hpp"

using nlohmann::ordered_json;

namespace {

sgr::Graph read_graph_arg(const std::string& path) {
    if (path == "-") return sgr::load_edge_list(std::cin, "<stdin>");
    return sgr::load_edge_list_file(path);
}

void emit_report(const ordered_json& report, const std::string& out) {
    if (out.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream f(out);
        sgr::require(f.good(), "cannot open ", out, " for writing");
        f << report.dump(2) << "\n";
        sgr::require(f.good(), "write failed for ", out);
        std::cerr << "report written to " << out << "\n";
    }
}

void emit_graph(const sgr::Graph& g, const std::string& out) {
    if (out.empty()) {
        sgr::save_edge_list(std::cout, g);
    } else {
        sgr::save_edge_list_file(out, g);
        std::cerr << "graph written to " << out << "\n";
    }
}

ordered_json number_or_null(double v) {
    if (std::isfinite(v)) return ordered_json(v);
    return ordered_json(nullptr);
}

// MLP shapes live in the checkpoint; reconstruct the config from them so a
// rewire call does not need the training flags repeated.
sgr::MLPConfig mlp_config_from(const sgr::ParameterSet& params, const std::string& prefix,
                               sgr::Head head) {
    sgr::MLPConfig cfg;
    sgr::require(params.has(prefix + ".w1") && params.has(prefix + ".w2"),
                 "checkpoint lacks ", prefix, ".w1/", prefix, ".w2");
    cfg.in = params.at(prefix + ".w1").rows();
    cfg.hidden = params.at(prefix + ".w1").cols();
    cfg.out = params.at(prefix + ".w2").cols();
    cfg.head = head;
    return cfg;
}

ordered_json edges_json(const sgr::Graph& g) {
    ordered_json edges = ordered_json::array();
    for (const sgr::Edge& e : edge_list(g)) {
        edges.push_back(ordered_json{{"u", e.u}, {"v", e.v}, {"w", e.w}});
    }
    return edges;
}

struct GenArgs {
    std::size_t n = 16, n1 = 8, n2 = 8;
    double p = 0.3, q = 0.1;
    std::uint64_t seed = 0;
    std::string name = "barbell6";
    std::string out;
};

struct GraphCmdArgs {
    std::string graph;
    std::string out;
    std::string ckpt;
    std::uint64_t seed = 0;
    double eps = 0.25;
    bool squared = false;
    std::string mode = "rcut";
    double mu = 0.5;
    double alpha = 1.0;
    std::size_t mp_rounds = 0;
    std::string method = "greedy";
    std::size_t probes = 16;
    std::string graph_out;
    std::string diffusion;
    std::string learned;
};

struct TrainArgs {
    std::vector<std::string> data;
    std::string synthetic;
    std::size_t count = 32;
    std::string out_ckpt;
    std::string out;
    int epochs = 200;
    std::size_t batch = 8;
    double lr = 5e-4;
    std::uint64_t seed = 0;
    std::string mode = "rcut";
    double mu = 0.5;
    double alpha = 1.0;
    std::size_t mp_rounds = 0;
    bool learnable_mu = false;
    bool squared = false;
    // gnn
    std::string kind = "baseline";
    std::string tu_dir;
    std::string tu_name;
    double test_fraction = 0.15;
};

struct ExperimentArgs {
    std::vector<std::uint64_t> seeds{0, 1, 2};
    int epochs = 60;
    std::size_t count = 200;
    std::string out;
};

std::vector<sgr::Graph> training_graphs(const TrainArgs& a, std::size_t default_count) {
    std::vector<sgr::Graph> graphs;
    if (!a.data.empty()) {
        sgr::require(a.synthetic.empty(), "train: pass either --data or --synthetic");
        for (const std::string& path : a.data) graphs.push_back(read_graph_arg(path));
        return graphs;
    }
    const std::string kind = a.synthetic.empty() ? "er" : a.synthetic;
    const std::size_t count = a.count ? a.count : default_count;
    if (kind == "er") return sgr::synthetic_er_dataset(a.seed, count);
    if (kind == "sbm") return sgr::synthetic_sbm_dataset(a.seed, count);
    sgr::fail("train: unknown synthetic corpus '", kind, "'");
}

sgr::GapMode parse_gap_mode(const std::string& mode) {
    if (mode == "rcut") return sgr::GapMode::rcut;
    if (mode == "ncut") return sgr::GapMode::ncut;
    sgr::fail("unknown gap mode '", mode, "' (use rcut or ncut)");
}

int run_gen_er(const GenArgs& a) {
    emit_graph(sgr::gen_er(a.n, a.p, a.seed), a.out);
    return 0;
}

int run_gen_sbm(const GenArgs& a) {
    sgr::SbmSample s = sgr::gen_sbm(a.n1, a.n2, a.p, a.q, a.seed);
    emit_graph(s.graph, a.out);
    return 0;
}

int run_gen_named(const GenArgs& a) {
    emit_graph(sgr::gen_named(a.name), a.out);
    return 0;
}

int run_embed(const GraphCmdArgs& a) {
    const sgr::Graph g = read_graph_arg(a.graph);
    ordered_json config{{"graph", a.graph}};
    ordered_json results;
    if (a.learned.empty()) {
        config["mode"] = "spectral";
        const sgr::CTEmbedding emb = sgr::spectral_cte(g);
        const sgr::ResistanceMatrix rm = sgr::resistance_matrix(g);
        results["vol"] = emb.vol;
        results["z"] = sgr::matrix_json(emb.z);
        results["resistance"] = sgr::matrix_json(rm.resistance);
        results["commute_time"] = sgr::matrix_json(rm.commute_time);
    } else {
        config["mode"] = "learned";
        config["ckpt"] = a.learned;
        const sgr::Checkpoint ck = sgr::load_checkpoint(a.learned, "ct");
        sgr::CTLayerConfig cfg;
        cfg.mlp = mlp_config_from(ck.params, "ct", sgr::Head::tanh_head);
        cfg.squared_distance = a.squared;
        const sgr::CTLayerOutput out = sgr::ct_layer_forward(g, ck.params, cfg);
        results["z"] = sgr::matrix_json(out.z);
        results["t"] = sgr::matrix_json(out.t);
        results["loss_ct"] = out.loss_ct;
    }
    emit_report(sgr::make_report("embed", a.seed, config, results), a.out);
    return 0;
}

int run_bounds(const GraphCmdArgs& a) {
    const sgr::Graph g = read_graph_arg(a.graph);
    const sgr::BoundsReport br = sgr::bounds_report(g);
    const sgr::ResistanceBoundReport rb = sgr::resistance_bound_check(g, a.eps);

    ordered_json pairs = ordered_json::array();
    for (const sgr::PairBound& p : br.pairs) {
        pairs.push_back(ordered_json{{"u", p.u},
                                     {"v", p.v},
                                     {"lhs", p.lhs},
                                     {"rhs_loose", p.rhs_loose},
                                     {"rhs_refined", p.rhs_refined},
                                     {"holds_loose", p.holds_loose},
                                     {"holds_refined", p.holds_refined}});
    }
    ordered_json results;
    results["gap_normalized"] = br.gap_normalized;
    results["gap_unnormalized"] = br.gap_unnormalized;
    results["used_normalized_gap"] = br.used_normalized_gap;
    results["d_min"] = br.d_min;
    results["pairs"] = std::move(pairs);
    results["all_loose_hold"] = br.all_loose_hold;
    results["all_refined_hold"] = br.all_refined_hold;
    results["resistance"] = ordered_json{
        {"eps", rb.eps},
        {"cheeger", ordered_json{{"value", rb.cheeger.value},
                                 {"method", rb.cheeger.method},
                                 {"cut_side", rb.cheeger.cut_side}}},
        {"c", rb.c},
        {"max_resistance", rb.max_resistance},
        {"argmax", ordered_json::array({rb.argmax_u, rb.argmax_v})},
        {"max_r_within_inv_h2", rb.max_r_within_inv_h2},
        {"violating_pairs", rb.violating_pairs},
        {"all_pairs_hold", rb.all_pairs_hold},
        {"cheeger_upper", rb.cheeger_upper},
        {"cheeger_upper_holds", rb.cheeger_upper_holds}};
    emit_report(sgr::make_report("bounds", 0, ordered_json{{"graph", a.graph}, {"eps", a.eps}},
                                 results),
                a.out);
    return 0;
}

int run_rewire_ct(const GraphCmdArgs& a) {
    const sgr::Graph g = read_graph_arg(a.graph);
    sgr::CTLayerConfig cfg;
    cfg.squared_distance = a.squared;
    sgr::ParameterSet params;
    if (a.ckpt.empty()) {
        params = sgr::init_ct_params(cfg, a.seed);
    } else {
        params = sgr::load_checkpoint(a.ckpt, "ct").params;
        cfg.mlp = mlp_config_from(params, "ct", sgr::Head::tanh_head);
    }
    const sgr::CTLayerOutput out = sgr::ct_layer_forward(g, params, cfg);
    ordered_json config{{"graph", a.graph},
                        {"ckpt", a.ckpt},
                        {"squared_distance", cfg.squared_distance}};
    ordered_json results;
    results["t"] = sgr::matrix_json(out.t);
    results["z"] = sgr::matrix_json(out.z);
    results["loss_ct"] = out.loss_ct;
    emit_report(sgr::make_report("rewire-ct", a.seed, config, results), a.out);
    return 0;
}

int run_rewire_gap(const GraphCmdArgs& a) {
    const sgr::Graph g = read_graph_arg(a.graph);
    sgr::GapLayerConfig cfg;
    cfg.mode = parse_gap_mode(a.mode);
    cfg.mu = a.mu;
    cfg.alpha = a.alpha;
    cfg.mp_rounds = a.mp_rounds;
    sgr::ParameterSet params;
    if (a.ckpt.empty()) {
        params = sgr::init_gap_params(cfg, a.seed);
    } else {
        params = sgr::load_checkpoint(a.ckpt, "gap").params;
        cfg.mlp = mlp_config_from(params, "gap", sgr::Head::softmax_head);
        cfg.learnable_mu = params.has("gap.mu_raw");
    }
    const sgr::GapLayerOutput out = sgr::gap_layer_forward(g, params, cfg);
    ordered_json config{{"graph", a.graph}, {"ckpt", a.ckpt},   {"mode", a.mode},
                        {"mu", a.mu},       {"alpha", a.alpha},
                        {"mp_rounds", a.mp_rounds}};
    ordered_json results;
    results["t"] = sgr::matrix_json(out.t);
    results["atilde"] = sgr::matrix_json(out.atilde);
    results["s"] = sgr::matrix_json(out.s);
    results["f2"] = out.f2;
    results["loss_cut"] = out.loss_cut;
    results["loss_fiedler"] = out.loss_fiedler;
    results["loss_gap"] = out.loss_gap;
    results["lambda_approx"] = out.lambda_approx;
    results["mu_effective"] = out.mu;
    emit_report(sgr::make_report("rewire-gap", a.seed, config, results), a.out);
    return 0;
}

int run_sparsify(const GraphCmdArgs& a) {
    const sgr::Graph g = read_graph_arg(a.graph);
    sgr::SparsifyResult result;
    if (a.method == "greedy") {
        result = sgr::greedy_sparsify(g, a.eps);
    } else if (a.method == "sample") {
        result = sgr::sample_sparsify(g, a.eps, a.seed);
    } else {
        sgr::fail("unknown sparsify method '", a.method, "' (use greedy or sample)");
    }
    const sgr::SimilarityReport sim =
        sgr::spectral_similarity_report(g, result.sparsified, a.eps, a.probes, a.seed);

    ordered_json results;
    results["method"] = result.method;
    results["eps"] = result.eps;
    results["gamma"] = number_or_null(result.gamma);
    results["accumulator_ok"] = result.accumulator_ok;
    results["draws"] = result.draws;
    results["edges_in"] = edge_list(g).size();
    results["edges_kept"] = edge_list(result.sparsified).size();
    results["edges"] = edges_json(result.sparsified);
    results["similarity"] = ordered_json{{"min_ratio", sim.min_ratio},
                                         {"max_ratio", sim.max_ratio},
                                         {"fraction_in_range", sim.fraction_in_range},
                                         {"probe_count", sim.probe_count},
                                         {"eps", sim.eps}};
    if (!a.graph_out.empty()) emit_graph(result.sparsified, a.graph_out);
    emit_report(sgr::make_report("sparsify", a.seed,
                                 ordered_json{{"graph", a.graph},
                                              {"eps", a.eps},
                                              {"method", a.method},
                                              {"probes", a.probes}},
                                 results),
                a.out);
    return 0;
}

int run_curvature(const GraphCmdArgs& a) {
    const sgr::Graph g = read_graph_arg(a.graph);
    sgr::CurvatureReport report;
    ordered_json config{{"graph", a.graph}};
    if (a.diffusion.empty()) {
        report = sgr::curvature_bounds_check(g);
    } else {
        const sgr::Graph tg = read_graph_arg(a.diffusion);
        sgr::require(tg.n == g.n, "diffusion graph has ", tg.n, " nodes, expected ", g.n);
        report = sgr::curvature_on_diffusion(g, tg.adjacency);
        config["diffusion"] = a.diffusion;
    }
    ordered_json edges = ordered_json::array();
    for (const sgr::EdgeCurvature& e : report.edges) {
        edges.push_back(ordered_json{{"u", e.u},
                                     {"v", e.v},
                                     {"link_value", e.link_value},
                                     {"kappa", number_or_null(e.kappa)},
                                     {"lower", e.lower},
                                     {"upper", number_or_null(e.upper)},
                                     {"lower_holds", e.lower_holds},
                                     {"upper_holds", e.upper_holds},
                                     {"forman_holds", e.forman_holds},
                                     {"unbounded", e.unbounded}});
    }
    ordered_json results;
    results["node_p"] = report.node_p;
    results["edges"] = std::move(edges);
    results["all_bounds_hold"] = report.all_bounds_hold;
    results["unbounded_edges"] = report.unbounded_edges;
    emit_report(sgr::make_report("curvature", 0, config, results), a.out);
    return 0;
}

int run_train_ct(const TrainArgs& a) {
    const std::vector<sgr::Graph> graphs = training_graphs(a, 32);
    sgr::CTLayerConfig cfg;
    cfg.squared_distance = a.squared;
    sgr::RewireTrainConfig tc;
    tc.adam.lr = a.lr;
    tc.epochs = a.epochs;
    tc.batch = a.batch;
    tc.seed = a.seed;
    std::cerr << "training ct layer on " << graphs.size() << " graphs for " << a.epochs
              << " epochs\n";
    const sgr::RewireTrainResult result = sgr::train_ct_embedder(graphs, cfg, tc);
    if (!a.out_ckpt.empty()) {
        sgr::save_checkpoint(a.out_ckpt, "ct", result.params);
        std::cerr << "checkpoint written to " << a.out_ckpt << "\n";
    }
    ordered_json results;
    results["loss_trace"] = result.loss_trace;
    results["final_loss"] = result.loss_trace.back();
    results["graphs"] = graphs.size();
    emit_report(sgr::make_report("train-ct", a.seed,
                                 ordered_json{{"epochs", a.epochs},
                                              {"batch", a.batch},
                                              {"lr", a.lr},
                                              {"ckpt", a.out_ckpt}},
                                 results),
                a.out);
    return 0;
}

int run_train_gap(const TrainArgs& a) {
    const std::vector<sgr::Graph> graphs = training_graphs(a, 32);
    sgr::GapLayerConfig cfg;
    cfg.mode = parse_gap_mode(a.mode);
    cfg.mu = a.mu;
    cfg.alpha = a.alpha;
    cfg.mp_rounds = a.mp_rounds;
    cfg.learnable_mu = a.learnable_mu;
    sgr::RewireTrainConfig tc;
    tc.adam.lr = a.lr;
    tc.epochs = a.epochs;
    tc.batch = a.batch;
    tc.seed = a.seed;
    std::cerr << "training gap layer on " << graphs.size() << " graphs for " << a.epochs
              << " epochs\n";
    const sgr::RewireTrainResult result = sgr::train_gap_layer(graphs, cfg, tc);
    if (!a.out_ckpt.empty()) {
        sgr::save_checkpoint(a.out_ckpt, "gap", result.params);
        std::cerr << "checkpoint written to " << a.out_ckpt << "\n";
    }
    ordered_json results;
    results["loss_trace"] = result.loss_trace;
    results["final_loss"] = result.loss_trace.back();
    results["graphs"] = graphs.size();
    emit_report(sgr::make_report("train-gap", a.seed,
                                 ordered_json{{"epochs", a.epochs},
                                              {"batch", a.batch},
                                              {"lr", a.lr},
                                              {"mode", a.mode},
                                              {"mu", a.mu},
                                              {"alpha", a.alpha},
                                              {"mp_rounds", a.mp_rounds},
                                              {"ckpt", a.out_ckpt}},
                                 results),
                a.out);
    return 0;
}

int run_train_gnn(const TrainArgs& a) {
    std::vector<sgr::Graph> graphs;
    if (!a.tu_dir.empty()) {
        sgr::require(!a.tu_name.empty(), "train gnn: --tu-name required with --tu-dir");
        graphs = sgr::load_tu_dataset(a.tu_dir, a.tu_name);
    } else {
        graphs = training_graphs(a, 200);
    }
    sgr::ModelSpec spec;
    if (a.kind == "baseline") {
        spec.kind = sgr::ModelKind::baseline;
    } else if (a.kind == "ct") {
        spec.kind = sgr::ModelKind::ct;
    } else if (a.kind == "gap-rcut") {
        spec.kind = sgr::ModelKind::gap;
        spec.gap_mode = sgr::GapMode::rcut;
    } else if (a.kind == "gap-ncut") {
        spec.kind = sgr::ModelKind::gap;
        spec.gap_mode = sgr::GapMode::ncut;
    } else {
        sgr::fail("train gnn: unknown kind '", a.kind, "'");
    }
    int classes = 0;
    for (const sgr::Graph& g : graphs)
        if (g.label) classes = std::max(classes, *g.label + 1);
    spec.classes = static_cast<std::size_t>(std::max(classes, 2));
    if (!graphs.empty() && graphs.front().features) spec.in_dim = graphs.front().features->cols();

    sgr::TrainConfig tc;
    tc.adam.lr = a.lr;
    tc.epochs = a.epochs;
    tc.batch = a.batch;
    tc.test_fraction = a.test_fraction;
    tc.seed = a.seed;
    std::cerr << "training " << a.kind << " gnn on " << graphs.size() << " graphs for "
              << a.epochs << " epochs\n";
    const sgr::TrainOutput out = sgr::train_gnn(spec, graphs, tc);
    if (!a.out_ckpt.empty()) {
        sgr::save_checkpoint(a.out_ckpt, "gnn-" + a.kind, out.params);
        std::cerr << "checkpoint written to " << a.out_ckpt << "\n";
    }
    ordered_json results;
    results["train_loss"] = out.metrics.train_loss;
    results["train_accuracy"] = out.metrics.train_accuracy;
    results["test_accuracy"] = out.metrics.test_accuracy;
    results["confusion"] = sgr::matrix_json(out.metrics.confusion);
    results["train_size"] = out.metrics.train_size;
    results["test_size"] = out.metrics.test_size;
    emit_report(sgr::make_report("train-gnn", a.seed,
                                 ordered_json{{"kind", a.kind},
                                              {"epochs", a.epochs},
                                              {"batch", a.batch},
                                              {"lr", a.lr},
                                              {"test_fraction", a.test_fraction},
                                              {"classes", spec.classes},
                                              {"ckpt", a.out_ckpt}},
                                 results),
                a.out);
    return 0;
}

int run_experiment(const ExperimentArgs& a) {
    const sgr::ExperimentResult res = sgr::experiment_synthetic(a.seeds, a.epochs, a.count);
    ordered_json table;
    for (const std::string& ds : res.datasets) {
        ordered_json row;
        for (const std::string& model : res.models) {
            const sgr::ExperimentCell& cell = res.table.at(ds).at(model);
            row[model] = ordered_json{
                {"mean", cell.mean}, {"stddev", cell.stddev}, {"runs", cell.runs}};
        }
        table[ds] = std::move(row);
    }
    ordered_json results;
    results["datasets"] = res.datasets;
    results["models"] = res.models;
    results["table"] = std::move(table);
    results["scale_note"] = res.scale_note;

    std::cerr << "dataset";
    for (const std::string& model : res.models) std::cerr << "\t" << model;
    std::cerr << "\n";
    for (const std::string& ds : res.datasets) {
        std::cerr << ds;
        for (const std::string& model : res.models) {
            const sgr::ExperimentCell& cell = res.table.at(ds).at(model);
            std::cerr << "\t" << cell.mean << " +- " << cell.stddev;
        }
        std::cerr << "\n";
    }

    ordered_json config{{"seeds", a.seeds},
                        {"epochs", a.epochs},
                        {"graphs_per_dataset", a.count}};
    emit_report(sgr::make_report("experiment-synthetic", a.seeds.front(), config, results),
                a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral rewiring, sparsification and curvature toolkit"};
    app.require_subcommand(1);

    GenArgs gen_args;
    GraphCmdArgs embed_args, bounds_args, ct_args, gap_args, sparsify_args, curvature_args;
    TrainArgs train_ct_args, train_gap_args, train_gnn_args;
    train_gap_args.mode = "rcut";
    train_gnn_args.epochs = 60;
    train_gnn_args.batch = 32;
    train_gnn_args.count = 200;
    ExperimentArgs exp_args;
    int rc = 0;

    CLI::App* gen = app.add_subcommand("gen", "generate a graph as an edge list");
    gen->require_subcommand(1);
    CLI::App* gen_er = gen->add_subcommand("er", "connected Erdos-Renyi sample");
    gen_er->add_option("--n", gen_args.n, "node count");
    gen_er->add_option("--p", gen_args.p, "edge probability");
    gen_er->add_option("--seed", gen_args.seed, "rng seed");
    gen_er->add_option("--out", gen_args.out, "output path (stdout when absent)");
    gen_er->callback([&] { rc = run_gen_er(gen_args); });
    CLI::App* gen_sbm = gen->add_subcommand("sbm", "two-block stochastic block model");
    gen_sbm->add_option("--n1", gen_args.n1, "first block size");
    gen_sbm->add_option("--n2", gen_args.n2, "second block size");
    gen_sbm->add_option("--p", gen_args.p, "intra-block probability")->default_val(0.7);
    gen_sbm->add_option("--q", gen_args.q, "inter-block probability");
    gen_sbm->add_option("--seed", gen_args.seed, "rng seed");
    gen_sbm->add_option("--out", gen_args.out, "output path (stdout when absent)");
    gen_sbm->callback([&] { rc = run_gen_sbm(gen_args); });
    CLI::App* gen_named = gen->add_subcommand("named", "small named fixture");
    gen_named->add_option("--name", gen_args.name, "P2, P3, K3, C4 or barbell6")->required();
    gen_named->add_option("--out", gen_args.out, "output path (stdout when absent)");
    gen_named->callback([&] { rc = run_gen_named(gen_args); });

    CLI::App* embed = app.add_subcommand("embed", "commute-time embedding");
    embed->add_option("graph", embed_args.graph, "edge list path, - for stdin")->required();
    embed->add_option("--learned", embed_args.learned, "ct checkpoint for a learned embedding");
    embed->add_flag("--squared", embed_args.squared, "squared distances in the learned mode");
    embed->add_option("--out", embed_args.out, "report path (stdout when absent)");
    embed->callback([&] { rc = run_embed(embed_args); });

    CLI::App* bounds = app.add_subcommand("bounds", "resistance and degree bound diagnostics");
    bounds->add_option("graph", bounds_args.graph, "edge list path, - for stdin")->required();
    bounds->add_option("--eps", bounds_args.eps, "exponent in (0, 0.5]")->default_val(0.25);
    bounds->add_option("--out", bounds_args.out, "report path (stdout when absent)");
    bounds->callback([&] { rc = run_bounds(bounds_args); });

    CLI::App* rewire = app.add_subcommand("rewire", "rewire a graph with a learned layer");
    rewire->require_subcommand(1);
    CLI::App* rewire_ct = rewire->add_subcommand("ct", "commute-time layer");
    rewire_ct->add_option("graph", ct_args.graph, "edge list path, - for stdin")->required();
    rewire_ct->add_option("--ckpt", ct_args.ckpt, "trained ct checkpoint");
    rewire_ct->add_option("--seed", ct_args.seed, "init seed when no checkpoint is given");
    rewire_ct->add_flag("--squared", ct_args.squared, "use squared distances");
    rewire_ct->add_option("--out", ct_args.out, "report path (stdout when absent)");
    rewire_ct->callback([&] { rc = run_rewire_ct(ct_args); });
    CLI::App* rewire_gap = rewire->add_subcommand("gap", "spectral-gap layer");
    rewire_gap->add_option("graph", gap_args.graph, "edge list path, - for stdin")->required();
    rewire_gap->add_option("--ckpt", gap_args.ckpt, "trained gap checkpoint");
    rewire_gap->add_option("--seed", gap_args.seed, "init seed when no checkpoint is given");
    rewire_gap->add_option("--mode", gap_args.mode, "rcut or ncut")->default_val("rcut");
    rewire_gap->add_option("--mu", gap_args.mu, "gradient step size")->default_val(0.5);
    rewire_gap->add_option("--alpha", gap_args.alpha, "fiedler loss weight")->default_val(1.0);
    rewire_gap->add_option("--mp-rounds", gap_args.mp_rounds,
                           "feature smoothing rounds ahead of the assignment MLP");
    rewire_gap->add_option("--out", gap_args.out, "report path (stdout when absent)");
    rewire_gap->callback([&] { rc = run_rewire_gap(gap_args); });

    CLI::App* sparsify = app.add_subcommand("sparsify", "effective-resistance sparsification");
    sparsify->add_option("graph", sparsify_args.graph, "edge list path, - for stdin")
        ->required();
    sparsify->add_option("--eps", sparsify_args.eps, "accuracy parameter")->required();
    sparsify->add_option("--method", sparsify_args.method, "greedy or sample")
        ->default_val("greedy");
    sparsify->add_option("--seed", sparsify_args.seed, "sampling seed");
    sparsify->add_option("--probes", sparsify_args.probes, "random similarity probes")
        ->default_val(16);
    sparsify->add_option("--graph-out", sparsify_args.graph_out, "write the sparsified graph");
    sparsify->add_option("--out", sparsify_args.out, "report path (stdout when absent)");
    sparsify->callback([&] { rc = run_sparsify(sparsify_args); });

    CLI::App* curvature = app.add_subcommand("curvature", "resistance curvature report");
    curvature->add_option("graph", curvature_args.graph, "edge list path, - for stdin")
        ->required();
    curvature->add_option("--diffusion", curvature_args.diffusion,
                          "edge list carrying a rewired support to evaluate instead of A");
    curvature->add_option("--out", curvature_args.out, "report path (stdout when absent)");
    curvature->callback([&] { rc = run_curvature(curvature_args); });

    CLI::App* train = app.add_subcommand("train", "train a layer or a classifier");
    train->require_subcommand(1);
    CLI::App* train_ct = train->add_subcommand("ct", "train the commute-time layer");
    train_ct->add_option("--data", train_ct_args.data, "edge list paths");
    train_ct->add_option("--synthetic", train_ct_args.synthetic, "er or sbm corpus");
    train_ct->add_option("--count", train_ct_args.count, "synthetic corpus size");
    train_ct->add_option("--epochs", train_ct_args.epochs)->default_val(200);
    train_ct->add_option("--batch", train_ct_args.batch)->default_val(8);
    train_ct->add_option("--lr", train_ct_args.lr)->default_val(5e-4);
    train_ct->add_option("--seed", train_ct_args.seed);
    train_ct->add_flag("--squared", train_ct_args.squared, "use squared distances");
    train_ct->add_option("--ckpt-out", train_ct_args.out_ckpt, "checkpoint path");
    train_ct->add_option("--out", train_ct_args.out, "report path (stdout when absent)");
    train_ct->callback([&] { rc = run_train_ct(train_ct_args); });

    CLI::App* train_gap = train->add_subcommand("gap", "train the spectral-gap layer");
    train_gap->add_option("--data", train_gap_args.data, "edge list paths");
    train_gap->add_option("--synthetic", train_gap_args.synthetic, "er or sbm corpus");
    train_gap->add_option("--count", train_gap_args.count, "synthetic corpus size");
    train_gap->add_option("--epochs", train_gap_args.epochs)->default_val(200);
    train_gap->add_option("--batch", train_gap_args.batch)->default_val(8);
    train_gap->add_option("--lr", train_gap_args.lr)->default_val(5e-4);
    train_gap->add_option("--seed", train_gap_args.seed);
    train_gap->add_option("--mode", train_gap_args.mode, "rcut or ncut")->default_val("rcut");
    train_gap->add_option("--mu", train_gap_args.mu)->default_val(0.5);
    train_gap->add_option("--alpha", train_gap_args.alpha)->default_val(1.0);
    train_gap->add_option("--mp-rounds", train_gap_args.mp_rounds,
                          "feature smoothing rounds ahead of the assignment MLP");
    train_gap->add_flag("--learnable-mu", train_gap_args.learnable_mu,
                        "optimize the step size through a softplus");
    train_gap->add_option("--ckpt-out", train_gap_args.out_ckpt, "checkpoint path");
    train_gap->add_option("--out", train_gap_args.out, "report path (stdout when absent)");
    train_gap->callback([&] { rc = run_train_gap(train_gap_args); });

    CLI::App* train_gnn = train->add_subcommand("gnn", "train a graph classifier");
    train_gnn->add_option("--kind", train_gnn_args.kind,
                          "baseline, ct, gap-rcut or gap-ncut")
        ->default_val("baseline");
    train_gnn->add_option("--tu-dir", train_gnn_args.tu_dir, "benchmark dataset directory");
    train_gnn->add_option("--tu-name", train_gnn_args.tu_name, "dataset file prefix");
    train_gnn->add_option("--synthetic", train_gnn_args.synthetic, "er or sbm corpus");
    train_gnn->add_option("--count", train_gnn_args.count, "synthetic corpus size");
    train_gnn->add_option("--epochs", train_gnn_args.epochs)->default_val(60);
    train_gnn->add_option("--batch", train_gnn_args.batch)->default_val(32);
    train_gnn->add_option("--lr", train_gnn_args.lr)->default_val(5e-4);
    train_gnn->add_option("--test-fraction", train_gnn_args.test_fraction)->default_val(0.15);
    train_gnn->add_option("--seed", train_gnn_args.seed);
    train_gnn->add_option("--ckpt-out", train_gnn_args.out_ckpt, "checkpoint path");
    train_gnn->add_option("--out", train_gnn_args.out, "report path (stdout when absent)");
    train_gnn->callback([&] { rc = run_train_gnn(train_gnn_args); });

    CLI::App* experiment = app.add_subcommand("experiment", "benchmark suites");
    experiment->require_subcommand(1);
    CLI::App* exp_syn = experiment->add_subcommand("synthetic", "SBM/ER classification table");
    exp_syn->add_option("--seeds", exp_args.seeds, "seeds, one run per seed");
    exp_syn->add_option("--epochs", exp_args.epochs)->default_val(60);
    exp_syn->add_option("--count", exp_args.count, "graphs per dataset")->default_val(200);
    exp_syn->add_option("--out", exp_args.out, "report path (stdout when absent)");
    exp_syn->callback([&] { rc = run_experiment(exp_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const sgr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
