#pragma once

#include <functional>
#include <memory>

#include "nn_ops.hpp"

namespace hdasc {

// Reverse-mode tape node. Nodes form a DAG per training step; parameter
// leaves survive across steps, everything else is released with the graph.
struct Node {
    Tensor value;
    Tensor grad;  // allocated on first accumulation
    bool requires_grad = false;
    bool is_leaf = false;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backprop;  // pulls this->grad into parents' grads

    void accumulate(const Tensor& g) {
        if (grad.empty()) grad = Tensor::zeros(value.shape());
        for (size_t i = 0; i < g.numel(); ++i) grad[i] += g[i];
    }

    Tensor& ensure_grad() {
        if (grad.empty()) grad = Tensor::zeros(value.shape());
        return grad;
    }
};

// Differentiable value: a tensor plus its position in the tape.
class Var {
public:
    Var() = default;
    explicit Var(std::shared_ptr<Node> n) : node_(std::move(n)) {}

    // Leaf without gradient (inputs, constants).
    static Var constant(Tensor t) {
        auto n = std::make_shared<Node>();
        n->value = std::move(t);
        n->is_leaf = true;
        return Var(std::move(n));
    }

    // Leaf with gradient (parameters, gradient-checked inputs).
    static Var param(Tensor t) {
        auto n = std::make_shared<Node>();
        n->value = std::move(t);
        n->requires_grad = true;
        n->is_leaf = true;
        return Var(std::move(n));
    }

    const Tensor& value() const { return node_->value; }
    Tensor& value_mut() { return node_->value; }
    const Tensor& grad() const { return node_->grad; }
    bool has_grad() const { return !node_->grad.empty(); }
    bool requires_grad() const { return node_ && node_->requires_grad; }
    void zero_grad() { node_->grad = Tensor(); }
    std::shared_ptr<Node> node() const { return node_; }
    bool defined() const { return node_ != nullptr; }

private:
    std::shared_ptr<Node> node_;
};

// Seeds the root with d(root)/d(root) = 1 and runs the tape in reverse
// topological order; each producing node is visited exactly once.
void backward(const Var& root);

// --- Var op set. Each mirrors the plain-tensor kernel of the same name. ---

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double s);
Var add_scalar(const Var& a, double s);
Var dense(const Var& x, const Var& w, const Var& b);
Var matmul(const Var& a, const Var& b);
Var add_col_bias(const Var& x, const Var& b);
Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad);
Var pixel_shuffle(const Var& x, int r);
Var relu(const Var& x);
Var leaky_relu(const Var& x, double slope);
Var tanh_op(const Var& x);
Var sigmoid_op(const Var& x);
Var softplus_op(const Var& x);
Var clamp(const Var& x, double lo, double hi);
Var clamp_min(const Var& x, double lo);
Var log_op(const Var& x);
Var sum(const Var& x);
Var mean(const Var& x);
Var norm2(const Var& x);
Var dft2d(const Var& x);
Var hypot_pair(const Var& x, double eps);
Var concat(const Var& a, const Var& b);
Var slice(const Var& x, size_t offset, size_t len);
Var rowwise_mul(const Var& x, const Var& a);
Var pow_scalar(const Var& s, double p);
Var bcast_mul(const Var& x, const Var& s);
Var reshape(const Var& x, Shape s);

}  // namespace hdasc
