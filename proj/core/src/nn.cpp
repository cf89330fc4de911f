#include "sgr/nn.hpp"

#include <cmath>

#include "sgr/error.hpp"

namespace sgr {

void ParameterSet::add(const std::string& name, Matrix value) {
    require(entries.count(name) == 0, "ParameterSet: duplicate parameter '", name, "'");
    Entry e;
    e.m = Matrix(value.rows(), value.cols());
    e.v = Matrix(value.rows(), value.cols());
    e.value = std::move(value);
    entries.emplace(name, std::move(e));
}

Matrix& ParameterSet::at(const std::string& name) {
    auto it = entries.find(name);
    require(it != entries.end(), "ParameterSet: unknown parameter '", name, "'");
    return it->second.value;
}

const Matrix& ParameterSet::at(const std::string& name) const {
    auto it = entries.find(name);
    require(it != entries.end(), "ParameterSet: unknown parameter '", name, "'");
    return it->second.value;
}

Binding bind_params(Tape& tape, const ParameterSet& params) {
    Binding binding;
    for (const auto& [name, entry] : params.entries) binding[name] = tape.input(entry.value);
    return binding;
}

GradMap collect_grads(const Tape& tape, const Binding& binding) {
    GradMap grads;
    for (const auto& [name, id] : binding) grads[name] = tape.grad(id);
    return grads;
}

Matrix glorot(std::size_t rows, std::size_t cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (double& x : m.raw()) x = rng.uniform(-limit, limit);
    return m;
}

void init_mlp(ParameterSet& params, const std::string& prefix, const MLPConfig& cfg, Rng& rng) {
    params.add(prefix + ".w1", glorot(cfg.in, cfg.hidden, rng));
    params.add(prefix + ".b1", Matrix(1, cfg.hidden));
    params.add(prefix + ".w2", glorot(cfg.hidden, cfg.out, rng));
    params.add(prefix + ".b2", Matrix(1, cfg.out));
}

Tape::Id mlp_forward(Tape& tape, const Binding& binding, const std::string& prefix,
                     Tape::Id x, const MLPConfig& cfg) {
    const Tape::Id h =
        tape.tanh(tape.add(tape.matmul(x, binding.at(prefix + ".w1")), binding.at(prefix + ".b1")));
    const Tape::Id pre =
        tape.add(tape.matmul(h, binding.at(prefix + ".w2")), binding.at(prefix + ".b2"));
    switch (cfg.head) {
        case Head::tanh_head: return tape.tanh(pre);
        case Head::softmax_head: return tape.row_softmax(pre);
        case Head::linear_head: return pre;
    }
    fail("mlp_forward: bad head");
}

void adam_step(ParameterSet& params, const GradMap& grads, const AdamConfig& cfg) {
    params.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(params.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(params.step));
    for (auto& [name, entry] : params.entries) {
        auto git = grads.find(name);
        require(git != grads.end(), "adam_step: missing gradient for '", name, "'");
        const Matrix& g = git->second;
        require(g.same_shape(entry.value), "adam_step: gradient shape mismatch for '", name, "'");
        for (std::size_t i = 0; i < entry.value.size(); ++i) {
            const double gi = g.raw()[i];
            entry.m.raw()[i] = cfg.beta1 * entry.m.raw()[i] + (1.0 - cfg.beta1) * gi;
            entry.v.raw()[i] = cfg.beta2 * entry.v.raw()[i] + (1.0 - cfg.beta2) * gi * gi;
            const double mhat = entry.m.raw()[i] / bc1;
            const double vhat = entry.v.raw()[i] / bc2;
            double& p = entry.value.raw()[i];
            p -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
            p -= cfg.lr * cfg.weight_decay * p;
        }
    }
}

double grad_check(const LossBuilder& build, ParameterSet& params, double h) {
    Tape tape;
    Binding binding = bind_params(tape, params);
    const Tape::Id loss = build(tape, binding);
    tape.backward(loss);
    const GradMap analytic = collect_grads(tape, binding);

    const auto eval = [&]() {
        Tape t;
        Binding b = bind_params(t, params);
        return t.scalar_value(build(t, b));
    };

    double max_rel = 0.0;
    for (auto& [name, entry] : params.entries) {
        for (std::size_t i = 0; i < entry.value.size(); ++i) {
            double& p = entry.value.raw()[i];
            const double saved = p;
            p = saved + h;
            const double up = eval();
            p = saved - h;
            const double down = eval();
            p = saved;
            const double numeric = (up - down) / (2.0 * h);
            const double a = analytic.at(name).raw()[i];
            const double rel = std::fabs(a - numeric) / std::max(1e-8, std::fabs(a) + std::fabs(numeric));
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

}  // namespace sgr
