#include "autodiff.hpp"

#include <unordered_set>

namespace hdasc {

namespace {

Var make_op(Tensor value, std::vector<Var> inputs, std::function<void(Node&)> backprop) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    for (auto& v : inputs) {
        if (v.node()->requires_grad) n->requires_grad = true;
        n->parents.push_back(v.node());
    }
    if (n->requires_grad) n->backprop = std::move(backprop);
    return Var(std::move(n));
}

}  // namespace

void backward(const Var& root) {
    if (root.value().numel() != 1)
        throw DimensionError("backward: root must be scalar, got " + shape_str(root.value().shape()));
    if (!root.node()->requires_grad) return;
    // Iterative post-order DFS; reverse of the resulting order is topological.
    std::vector<Node*> order;
    std::unordered_set<Node*> visited;
    std::vector<std::pair<Node*, size_t>> stack;
    stack.emplace_back(root.node().get(), 0);
    visited.insert(root.node().get());
    while (!stack.empty()) {
        auto& [node, idx] = stack.back();
        if (idx < node->parents.size()) {
            Node* p = node->parents[idx++].get();
            if (p->requires_grad && !visited.count(p)) {
                visited.insert(p);
                stack.emplace_back(p, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    root.node()->ensure_grad()[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* n = *it;
        if (n->backprop && !n->grad.empty()) n->backprop(*n);
    }
}

Var add(const Var& a, const Var& b) {
    return make_op(add(a.value(), b.value()), {a, b}, [](Node& n) {
        for (int k = 0; k < 2; ++k)
            if (n.parents[k]->requires_grad) n.parents[k]->accumulate(n.grad);
    });
}

Var sub(const Var& a, const Var& b) {
    return make_op(sub(a.value(), b.value()), {a, b}, [](Node& n) {
        if (n.parents[0]->requires_grad) n.parents[0]->accumulate(n.grad);
        if (n.parents[1]->requires_grad) n.parents[1]->accumulate(scale(n.grad, -1.0));
    });
}

Var mul(const Var& a, const Var& b) {
    return make_op(mul(a.value(), b.value()), {a, b}, [](Node& n) {
        if (n.parents[0]->requires_grad) n.parents[0]->accumulate(mul(n.grad, n.parents[1]->value));
        if (n.parents[1]->requires_grad) n.parents[1]->accumulate(mul(n.grad, n.parents[0]->value));
    });
}

Var scale(const Var& a, double s) {
    return make_op(scale(a.value(), s), {a},
                   [s](Node& n) { n.parents[0]->accumulate(scale(n.grad, s)); });
}

Var add_scalar(const Var& a, double s) {
    return make_op(add_scalar(a.value(), s), {a},
                   [](Node& n) { n.parents[0]->accumulate(n.grad); });
}

Var dense(const Var& x, const Var& w, const Var& b) {
    return make_op(dense(x.value(), w.value(), b.value()), {x, w, b}, [](Node& n) {
        Node *xn = n.parents[0].get(), *wn = n.parents[1].get(), *bn = n.parents[2].get();
        dense_backward(xn->value, wn->value, n.grad,
                       xn->requires_grad ? &xn->ensure_grad() : nullptr,
                       wn->requires_grad ? &wn->ensure_grad() : nullptr,
                       bn->requires_grad ? &bn->ensure_grad() : nullptr);
    });
}

Var matmul(const Var& a, const Var& b) {
    return make_op(matmul(a.value(), b.value()), {a, b}, [](Node& n) {
        Node *an = n.parents[0].get(), *bn = n.parents[1].get();
        const Tensor& A = an->value;
        const Tensor& B = bn->value;
        const int m = A.dim(0), k = A.dim(1), c = B.dim(1);
        if (an->requires_grad) {
            Tensor& ga = an->ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int p = 0; p < k; ++p) {
                    double acc = 0.0;
                    for (int j = 0; j < c; ++j)
                        acc += n.grad[static_cast<size_t>(i) * c + j] * B[static_cast<size_t>(p) * c + j];
                    ga[static_cast<size_t>(i) * k + p] += acc;
                }
        }
        if (bn->requires_grad) {
            Tensor& gb = bn->ensure_grad();
            for (int p = 0; p < k; ++p)
                for (int j = 0; j < c; ++j) {
                    double acc = 0.0;
                    for (int i = 0; i < m; ++i)
                        acc += A[static_cast<size_t>(i) * k + p] * n.grad[static_cast<size_t>(i) * c + j];
                    gb[static_cast<size_t>(p) * c + j] += acc;
                }
        }
    });
}

Var add_col_bias(const Var& x, const Var& b) {
    return make_op(add_col_bias(x.value(), b.value()), {x, b}, [](Node& n) {
        Node *xn = n.parents[0].get(), *bn = n.parents[1].get();
        if (xn->requires_grad) xn->accumulate(n.grad);
        if (bn->requires_grad) {
            Tensor& gb = bn->ensure_grad();
            const int m = n.grad.dim(0), c = n.grad.dim(1);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < c; ++j) gb[i] += n.grad[static_cast<size_t>(i) * c + j];
        }
    });
}

Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad) {
    return make_op(conv2d(x.value(), w.value(), b.value(), stride, pad), {x, w, b},
                   [stride, pad](Node& n) {
                       Node *xn = n.parents[0].get(), *wn = n.parents[1].get(), *bn = n.parents[2].get();
                       conv2d_backward(xn->value, wn->value, n.grad, stride, pad,
                                       xn->requires_grad ? &xn->ensure_grad() : nullptr,
                                       wn->requires_grad ? &wn->ensure_grad() : nullptr,
                                       bn->requires_grad ? &bn->ensure_grad() : nullptr);
                   });
}

Var pixel_shuffle(const Var& x, int r) {
    return make_op(pixel_shuffle(x.value(), r), {x}, [r](Node& n) {
        n.parents[0]->accumulate(pixel_unshuffle(n.grad, r));
    });
}

namespace {

template <class Fwd, class Deriv>
Var elementwise(const Var& x, Fwd fwd, Deriv dv) {
    Tensor out = fwd(x.value());
    Tensor d(out.shape());
    for (size_t i = 0; i < out.numel(); ++i) d[i] = dv(x.value()[i], out[i]);
    return make_op(std::move(out), {x}, [d = std::move(d)](Node& n) {
        n.parents[0]->accumulate(mul(n.grad, d));
    });
}

}  // namespace

Var relu(const Var& x) {
    return elementwise(
        x, [](const Tensor& t) { return relu(t); },
        [](double xi, double) { return xi > 0.0 ? 1.0 : 0.0; });
}

Var leaky_relu(const Var& x, double slope) {
    return elementwise(
        x, [slope](const Tensor& t) { return leaky_relu(t, slope); },
        [slope](double xi, double) { return xi > 0.0 ? 1.0 : slope; });
}

Var tanh_op(const Var& x) {
    return elementwise(
        x, [](const Tensor& t) { return tanh_op(t); },
        [](double, double yi) { return 1.0 - yi * yi; });
}

Var sigmoid_op(const Var& x) {
    return elementwise(
        x, [](const Tensor& t) { return sigmoid_op(t); },
        [](double, double yi) { return yi * (1.0 - yi); });
}

Var softplus_op(const Var& x) {
    return elementwise(
        x, [](const Tensor& t) { return softplus_op(t); },
        [](double xi, double) {
            return xi >= 0.0 ? 1.0 / (1.0 + std::exp(-xi)) : std::exp(xi) / (1.0 + std::exp(xi));
        });
}

Var clamp(const Var& x, double lo, double hi) {
    return elementwise(
        x, [lo, hi](const Tensor& t) { return clamp(t, lo, hi); },
        [lo, hi](double xi, double) { return (xi > lo && xi < hi) ? 1.0 : 0.0; });
}

Var clamp_min(const Var& x, double lo) {
    return elementwise(
        x, [lo](const Tensor& t) { return clamp_min(t, lo); },
        [lo](double xi, double) { return xi > lo ? 1.0 : 0.0; });
}

Var log_op(const Var& x) {
    return elementwise(
        x, [](const Tensor& t) { return log_op(t); },
        [](double xi, double) { return 1.0 / xi; });
}

Var sum(const Var& x) {
    return make_op(sum(x.value()), {x}, [](Node& n) {
        n.parents[0]->accumulate(Tensor::full(n.parents[0]->value.shape(), n.grad[0]));
    });
}

Var mean(const Var& x) {
    const double inv = 1.0 / static_cast<double>(x.value().numel());
    return make_op(mean(x.value()), {x}, [inv](Node& n) {
        n.parents[0]->accumulate(Tensor::full(n.parents[0]->value.shape(), n.grad[0] * inv));
    });
}

Var norm2(const Var& x) {
    Tensor out = norm2(x.value());
    const double nv = out[0];
    return make_op(std::move(out), {x}, [nv](Node& n) {
        const double denom = nv > 1e-300 ? nv : 1e-300;
        n.parents[0]->accumulate(scale(n.parents[0]->value, n.grad[0] / denom));
    });
}

Var dft2d(const Var& x) {
    return make_op(dft2d(x.value()), {x},
                   [](Node& n) { n.parents[0]->accumulate(dft2d_adjoint(n.grad)); });
}

Var hypot_pair(const Var& x, double eps) {
    Tensor out = hypot_pair(x.value(), eps);
    return make_op(out, {x}, [out](Node& n) {
        const size_t m = out.numel();
        Tensor g = Tensor::zeros(n.parents[0]->value.shape());
        for (size_t i = 0; i < m; ++i) {
            // zero subgradient at the kink keeps |.| exact at zero difference
            const double inv = out[i] > 1e-300 ? n.grad[i] / out[i] : 0.0;
            g[i] = n.parents[0]->value[i] * inv;
            g[m + i] = n.parents[0]->value[m + i] * inv;
        }
        n.parents[0]->accumulate(g);
    });
}

Var concat(const Var& a, const Var& b) {
    const size_t na = a.value().numel();
    return make_op(concat(a.value(), b.value()), {a, b}, [na](Node& n) {
        if (n.parents[0]->requires_grad) n.parents[0]->accumulate(slice(n.grad, 0, na));
        if (n.parents[1]->requires_grad)
            n.parents[1]->accumulate(slice(n.grad, na, n.grad.numel() - na));
    });
}

Var slice(const Var& x, size_t offset, size_t len) {
    return make_op(slice(x.value(), offset, len), {x}, [offset, len](Node& n) {
        Tensor& g = n.parents[0]->ensure_grad();
        for (size_t i = 0; i < len; ++i) g[offset + i] += n.grad[i];
    });
}

Var rowwise_mul(const Var& x, const Var& a) {
    return make_op(rowwise_mul(x.value(), a.value()), {x, a}, [](Node& n) {
        Node *xn = n.parents[0].get(), *an = n.parents[1].get();
        const int m = xn->value.dim(0), c = xn->value.dim(1);
        if (xn->requires_grad) {
            Tensor g(xn->value.shape());
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < c; ++j)
                    g[static_cast<size_t>(i) * c + j] = n.grad[static_cast<size_t>(i) * c + j] * an->value[i];
            xn->accumulate(g);
        }
        if (an->requires_grad) {
            Tensor& ga = an->ensure_grad();
            for (int i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int j = 0; j < c; ++j)
                    acc += n.grad[static_cast<size_t>(i) * c + j] * xn->value[static_cast<size_t>(i) * c + j];
                ga[i] += acc;
            }
        }
    });
}

Var pow_scalar(const Var& s, double p) {
    const double sv = s.value()[0];
    return make_op(pow_scalar(s.value(), p), {s}, [sv, p](Node& n) {
        Tensor g(Shape{1}, {n.grad[0] * p * std::pow(sv, p - 1.0)});
        n.parents[0]->accumulate(g);
    });
}

Var bcast_mul(const Var& x, const Var& s) {
    return make_op(bcast_mul(x.value(), s.value()), {x, s}, [](Node& n) {
        Node *xn = n.parents[0].get(), *sn = n.parents[1].get();
        if (xn->requires_grad) xn->accumulate(scale(n.grad, sn->value[0]));
        if (sn->requires_grad) {
            double acc = 0.0;
            for (size_t i = 0; i < n.grad.numel(); ++i) acc += n.grad[i] * xn->value[i];
            Tensor g(Shape{1}, {acc});
            sn->accumulate(g);
        }
    });
}

Var reshape(const Var& x, Shape s) {
    Shape orig = x.value().shape();
    return make_op(x.value().reshaped(std::move(s)), {x}, [orig](Node& n) {
        n.parents[0]->accumulate(n.grad.reshaped(orig));
    });
}

}  // namespace hdasc
