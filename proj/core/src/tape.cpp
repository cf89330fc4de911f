#include "sgr/tape.hpp"

#include <cmath>

#include "sgr/error.hpp"

namespace sgr {

namespace {
constexpr double kNormFloor = 1e-12;
}

Tape::Id Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::input(Matrix value) {
    Node n;
    n.op = Op::input;
    n.value = std::move(value);
    return push(std::move(n));
}

Tape::Id Tape::constant(Matrix value) {
    Node n;
    n.op = Op::constant;
    n.value = std::move(value);
    return push(std::move(n));
}

Tape::Id Tape::matmul(Id a, Id b) {
    Node n;
    n.op = Op::matmul;
    n.a = a;
    n.b = b;
    n.value = sgr::matmul(nodes_[a].value, nodes_[b].value);
    return push(std::move(n));
}

Tape::Id Tape::add(Id a, Id b) {
    const Matrix& av = nodes_[a].value;
    const Matrix& bv = nodes_[b].value;
    Node n;
    n.op = Op::add;
    n.a = a;
    n.b = b;
    if (av.same_shape(bv)) {
        n.value = av + bv;
    } else {
        require(bv.rows() == 1 && bv.cols() == av.cols(),
                "tape add: shapes must match or b must be a 1-row bias");
        n.value = av;
        for (std::size_t i = 0; i < av.rows(); ++i)
            for (std::size_t j = 0; j < av.cols(); ++j) n.value(i, j) += bv(0, j);
    }
    return push(std::move(n));
}

Tape::Id Tape::sub(Id a, Id b) {
    Node n;
    n.op = Op::sub;
    n.a = a;
    n.b = b;
    n.value = nodes_[a].value - nodes_[b].value;
    return push(std::move(n));
}

Tape::Id Tape::hadamard(Id a, Id b) {
    Node n;
    n.op = Op::hadamard;
    n.a = a;
    n.b = b;
    n.value = sgr::hadamard(nodes_[a].value, nodes_[b].value);
    return push(std::move(n));
}

Tape::Id Tape::tanh(Id a) {
    Node n;
    n.op = Op::tanh_fn;
    n.a = a;
    n.value = nodes_[a].value;
    for (double& x : n.value.raw()) x = std::tanh(x);
    return push(std::move(n));
}

Tape::Id Tape::row_softmax(Id a) {
    Node n;
    n.op = Op::row_softmax;
    n.a = a;
    n.value = nodes_[a].value;
    Matrix& v = n.value;
    for (std::size_t i = 0; i < v.rows(); ++i) {
        double mx = v(i, 0);
        for (std::size_t j = 1; j < v.cols(); ++j) mx = std::max(mx, v(i, j));
        double sum = 0.0;
        for (std::size_t j = 0; j < v.cols(); ++j) {
            v(i, j) = std::exp(v(i, j) - mx);
            sum += v(i, j);
        }
        for (std::size_t j = 0; j < v.cols(); ++j) v(i, j) /= sum;
    }
    return push(std::move(n));
}

Tape::Id Tape::trace(Id a) {
    Node n;
    n.op = Op::trace_fn;
    n.a = a;
    n.value = Matrix(1, 1);
    n.value(0, 0) = sgr::trace(nodes_[a].value);
    return push(std::move(n));
}

Tape::Id Tape::frobenius_norm(Id a) {
    Node n;
    n.op = Op::frobenius;
    n.a = a;
    n.value = Matrix(1, 1);
    n.value(0, 0) = sgr::frobenius_norm(nodes_[a].value);
    return push(std::move(n));
}

Tape::Id Tape::scalar_div(Id a, Id s) {
    require(nodes_[s].value.size() == 1, "tape scalar_div: divisor must be 1x1");
    Node n;
    n.op = Op::scalar_div;
    n.a = a;
    n.b = s;
    n.value = nodes_[a].value * (1.0 / nodes_[s].value(0, 0));
    return push(std::move(n));
}

Tape::Id Tape::scalar_mul(Id a, Id s) {
    require(nodes_[s].value.size() == 1, "tape scalar_mul: multiplier must be 1x1");
    Node n;
    n.op = Op::scalar_mul;
    n.a = a;
    n.b = s;
    n.value = nodes_[a].value * nodes_[s].value(0, 0);
    return push(std::move(n));
}

Tape::Id Tape::cdist(Id z, bool squared) {
    Node n;
    n.op = Op::cdist_fn;
    n.a = z;
    n.flag = squared;
    const Matrix& zv = nodes_[z].value;
    const std::size_t rows = zv.rows();
    n.value = Matrix(rows, rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = i + 1; j < rows; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < zv.cols(); ++k) {
                const double d = zv(i, k) - zv(j, k);
                s += d * d;
            }
            const double val = squared ? s : std::sqrt(s);
            n.value(i, j) = val;
            n.value(j, i) = val;
        }
    }
    return push(std::move(n));
}

Tape::Id Tape::transpose(Id a) {
    Node n;
    n.op = Op::transpose_fn;
    n.a = a;
    n.value = sgr::transpose(nodes_[a].value);
    return push(std::move(n));
}

Tape::Id Tape::scale(Id a, double factor) {
    Node n;
    n.op = Op::scale;
    n.a = a;
    n.aux = factor;
    n.value = nodes_[a].value * factor;
    return push(std::move(n));
}

Tape::Id Tape::clamp_min(Id a, double floor) {
    Node n;
    n.op = Op::clamp_min;
    n.a = a;
    n.aux = floor;
    n.value = nodes_[a].value;
    for (double& x : n.value.raw()) x = std::max(x, floor);
    return push(std::move(n));
}

Tape::Id Tape::softplus(Id a) {
    Node n;
    n.op = Op::softplus;
    n.a = a;
    n.value = nodes_[a].value;
    for (double& x : n.value.raw()) x = x > 30.0 ? x : std::log1p(std::exp(x));
    return push(std::move(n));
}

Tape::Id Tape::softmax_xent(Id logits, int label) {
    const Matrix& lv = nodes_[logits].value;
    require(lv.rows() == 1, "tape softmax_xent: logits must be a 1xC row");
    require(label >= 0 && static_cast<std::size_t>(label) < lv.cols(),
            "tape softmax_xent: label ", label, " out of range");
    Node n;
    n.op = Op::softmax_xent;
    n.a = logits;
    n.label = label;
    double mx = lv(0, 0);
    for (std::size_t j = 1; j < lv.cols(); ++j) mx = std::max(mx, lv(0, j));
    double sum = 0.0;
    for (std::size_t j = 0; j < lv.cols(); ++j) sum += std::exp(lv(0, j) - mx);
    n.value = Matrix(1, 1);
    n.value(0, 0) = std::log(sum) - (lv(0, label) - mx);
    return push(std::move(n));
}

double Tape::scalar_value(Id id) const {
    require(nodes_[id].value.size() == 1, "tape scalar_value: node is not 1x1");
    return nodes_[id].value(0, 0);
}

void Tape::backward(Id loss) {
    require(nodes_[loss].value.size() == 1, "tape backward: loss must be 1x1");
    for (Node& n : nodes_) n.grad = Matrix(n.value.rows(), n.value.cols());
    nodes_[loss].grad(0, 0) = 1.0;

    for (Id id = loss; id >= 0; --id) {
        Node& n = nodes_[id];
        const Matrix& g = n.grad;
        switch (n.op) {
            case Op::input:
            case Op::constant:
                break;
            case Op::matmul: {
                Node& a = nodes_[n.a];
                Node& b = nodes_[n.b];
                a.grad += sgr::matmul(g, sgr::transpose(b.value));
                b.grad += sgr::matmul(sgr::transpose(a.value), g);
                break;
            }
            case Op::add: {
                Node& a = nodes_[n.a];
                Node& b = nodes_[n.b];
                a.grad += g;
                if (b.value.same_shape(g)) {
                    b.grad += g;
                } else {
                    for (std::size_t i = 0; i < g.rows(); ++i)
                        for (std::size_t j = 0; j < g.cols(); ++j) b.grad(0, j) += g(i, j);
                }
                break;
            }
            case Op::sub: {
                nodes_[n.a].grad += g;
                nodes_[n.b].grad -= g;
                break;
            }
            case Op::hadamard: {
                nodes_[n.a].grad += sgr::hadamard(g, nodes_[n.b].value);
                nodes_[n.b].grad += sgr::hadamard(g, nodes_[n.a].value);
                break;
            }
            case Op::tanh_fn: {
                Matrix d = g;
                for (std::size_t i = 0; i < d.size(); ++i)
                    d.raw()[i] *= 1.0 - n.value.raw()[i] * n.value.raw()[i];
                nodes_[n.a].grad += d;
                break;
            }
            case Op::row_softmax: {
                Node& a = nodes_[n.a];
                for (std::size_t i = 0; i < n.value.rows(); ++i) {
                    double inner = 0.0;
                    for (std::size_t j = 0; j < n.value.cols(); ++j)
                        inner += g(i, j) * n.value(i, j);
                    for (std::size_t j = 0; j < n.value.cols(); ++j)
                        a.grad(i, j) += n.value(i, j) * (g(i, j) - inner);
                }
                break;
            }
            case Op::trace_fn: {
                Node& a = nodes_[n.a];
                const double gs = g(0, 0);
                for (std::size_t i = 0; i < a.value.rows(); ++i) a.grad(i, i) += gs;
                break;
            }
            case Op::frobenius: {
                Node& a = nodes_[n.a];
                const double scale = g(0, 0) / std::max(n.value(0, 0), kNormFloor);
                a.grad += a.value * scale;
                break;
            }
            case Op::scalar_div: {
                Node& a = nodes_[n.a];
                Node& s = nodes_[n.b];
                const double sv = s.value(0, 0);
                a.grad += g * (1.0 / sv);
                s.grad(0, 0) += -dot(g, a.value) / (sv * sv);
                break;
            }
            case Op::scalar_mul: {
                Node& a = nodes_[n.a];
                Node& s = nodes_[n.b];
                a.grad += g * s.value(0, 0);
                s.grad(0, 0) += dot(g, a.value);
                break;
            }
            case Op::cdist_fn: {
                Node& z = nodes_[n.a];
                const Matrix& zv = z.value;
                const std::size_t rows = zv.rows();
                // Every entry (i,j) pulls on both endpoint rows; coincident
                // rows get a zero subgradient through the clamped divisor.
                for (std::size_t i = 0; i < rows; ++i) {
                    for (std::size_t j = 0; j < rows; ++j) {
                        if (i == j) continue;
                        const double gij = g(i, j);
                        if (gij == 0.0) continue;
                        const double factor =
                            n.flag ? 2.0 * gij : gij / std::max(n.value(i, j), kNormFloor);
                        for (std::size_t k = 0; k < zv.cols(); ++k) {
                            const double d = factor * (zv(i, k) - zv(j, k));
                            z.grad(i, k) += d;
                            z.grad(j, k) -= d;
                        }
                    }
                }
                break;
            }
            case Op::transpose_fn: {
                nodes_[n.a].grad += sgr::transpose(g);
                break;
            }
            case Op::scale: {
                nodes_[n.a].grad += g * n.aux;
                break;
            }
            case Op::clamp_min: {
                Node& a = nodes_[n.a];
                for (std::size_t i = 0; i < g.size(); ++i)
                    if (a.value.raw()[i] > n.aux) a.grad.raw()[i] += g.raw()[i];
                break;
            }
            case Op::softplus: {
                Node& a = nodes_[n.a];
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double x = a.value.raw()[i];
                    a.grad.raw()[i] += g.raw()[i] / (1.0 + std::exp(-x));
                }
                break;
            }
            case Op::softmax_xent: {
                Node& a = nodes_[n.a];
                const Matrix& lv = a.value;
                double mx = lv(0, 0);
                for (std::size_t j = 1; j < lv.cols(); ++j) mx = std::max(mx, lv(0, j));
                double sum = 0.0;
                for (std::size_t j = 0; j < lv.cols(); ++j) sum += std::exp(lv(0, j) - mx);
                const double gs = g(0, 0);
                for (std::size_t j = 0; j < lv.cols(); ++j) {
                    const double soft = std::exp(lv(0, j) - mx) / sum;
                    a.grad(0, j) += gs * (soft - (static_cast<int>(j) == n.label ? 1.0 : 0.0));
                }
                break;
            }
        }
    }
}

}  // namespace sgr
