#pragma once

#include <cstdint>
#include <vector>

#include "sgr/matrix.hpp"

namespace sgr {

// Append-only reverse-mode tape over dense matrices. Scalars live as 1x1
// matrices so every op has one value type. Nodes are identified by index;
// backward() walks the tape once in reverse and accumulates adjoints.
class Tape {
public:
    using Id = std::int32_t;

    enum class Op : std::uint8_t {
        input,
        constant,
        matmul,
        add,       // same shape, or row-broadcast bias (b is 1 x d)
        sub,
        hadamard,
        tanh_fn,
        row_softmax,
        trace_fn,
        frobenius,
        scalar_div,  // a / s, s is 1x1
        scalar_mul,  // a * s, s is 1x1
        cdist_fn,    // pairwise row distances, optionally squared
        transpose_fn,
        scale,      // a * compile-time constant
        clamp_min,  // max(a, floor) elementwise
        softplus,
        softmax_xent,  // logits 1xC vs stored label
    };

    Id input(Matrix value);     // leaf that accumulates gradient
    Id constant(Matrix value);  // leaf without gradient

    Id matmul(Id a, Id b);
    Id add(Id a, Id b);
    Id sub(Id a, Id b);
    Id hadamard(Id a, Id b);
    Id tanh(Id a);
    Id row_softmax(Id a);
    Id trace(Id a);
    Id frobenius_norm(Id a);
    Id scalar_div(Id a, Id s);
    Id scalar_mul(Id a, Id s);
    Id cdist(Id z, bool squared);
    Id transpose(Id a);
    Id scale(Id a, double factor);
    Id clamp_min(Id a, double floor);
    Id softplus(Id a);
    Id softmax_xent(Id logits, int label);

    const Matrix& value(Id id) const { return nodes_[id].value; }
    const Matrix& grad(Id id) const { return nodes_[id].grad; }
    // Value of a 1x1 node.
    double scalar_value(Id id) const;

    // Reverse pass from a scalar loss; resets previous gradients.
    void backward(Id loss);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Op op;
        Id a = -1, b = -1;
        Matrix value;
        Matrix grad;
        double aux = 0.0;  // scale factor / clamp floor
        int label = -1;
        bool flag = false;  // cdist: squared
    };

    Id push(Node n);
    std::vector<Node> nodes_;
};

}  // namespace sgr
