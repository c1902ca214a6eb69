#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace compfs {

/// Reverse-mode automatic differentiation over dense 2-D double tensors.
/// The graph lives in the tensors themselves (each node keeps shared_ptr
/// links to its parents plus a backward closure), so there is no global
/// tape and independent graphs can run on different threads.

struct TensorNode;
using Tensor = std::shared_ptr<TensorNode>;

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<MatRM>;
using MapConst = Eigen::Map<const MatRM>;
using ArrXd = Eigen::Array<double, Eigen::Dynamic, 1>;
using MapArr = Eigen::Map<Eigen::Array<double, Eigen::Dynamic, 1>>;
using MapArrConst = Eigen::Map<const Eigen::Array<double, Eigen::Dynamic, 1>>;

struct TensorNode {
    std::vector<double> value;
    std::vector<double> grad;  // allocated lazily, same shape as value
    long rows = 0;
    long cols = 0;
    bool requires_grad = false;
    std::vector<Tensor> parents;
    std::function<void()> backward_fn;  // accumulates into parents' grads
    std::string name;                   // set for parameters; aids checkpoints

    long size() const { return rows * cols; }

    MapMat mat() { return MapMat(value.data(), rows, cols); }
    MapConst mat() const { return MapConst(value.data(), rows, cols); }
    MapArr arr() { return MapArr(value.data(), size()); }
    MapArrConst arr() const { return MapArrConst(value.data(), size()); }

    void ensure_grad() {
        if (grad.empty()) grad.assign(static_cast<std::size_t>(size()), 0.0);
    }
    MapMat gmat() { return MapMat(grad.data(), rows, cols); }
    MapArr garr() { return MapArr(grad.data(), size()); }

    void zero_grad() {
        std::fill(grad.begin(), grad.end(), 0.0);
    }

    double scalar() const {
        if (size() != 1) throw std::logic_error("tensor: scalar() on non-scalar");
        return value[0];
    }
};

inline Tensor make_node(long rows, long cols, bool requires_grad) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("tensor: non-positive shape");
    auto t = std::make_shared<TensorNode>();
    t->rows = rows;
    t->cols = cols;
    t->requires_grad = requires_grad;
    t->value.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    return t;
}

/// Leaf with no gradient (inputs, sampled noise, frozen masks).
inline Tensor constant(long rows, long cols, const std::vector<double>& v) {
    auto t = make_node(rows, cols, false);
    if (static_cast<long>(v.size()) != rows * cols)
        throw std::invalid_argument("tensor: constant size mismatch");
    t->value = v;
    return t;
}

inline Tensor constant_scalar(double v) {
    auto t = make_node(1, 1, false);
    t->value[0] = v;
    return t;
}

/// Leaf that participates in optimization.
inline Tensor parameter(long rows, long cols, const std::string& name) {
    auto t = make_node(rows, cols, true);
    t->name = name;
    t->ensure_grad();
    return t;
}

namespace detail {

inline Tensor op_node(long rows, long cols, std::initializer_list<Tensor> parents) {
    bool rg = false;
    for (const auto& p : parents) rg = rg || p->requires_grad;
    auto t = make_node(rows, cols, rg);
    t->parents.assign(parents.begin(), parents.end());
    return t;
}

inline void check_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (a->rows != b->rows || a->cols != b->cols)
        throw std::invalid_argument(std::string("tensor: shape mismatch in ") + what);
}

inline void check_row_vector(const Tensor& r, long cols, const char* what) {
    if (r->rows != 1 || r->cols != cols)
        throw std::invalid_argument(std::string("tensor: expected 1x") +
                                    std::to_string(cols) + " in " + what);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elementwise and broadcast arithmetic
// ---------------------------------------------------------------------------

inline Tensor add(const Tensor& a, const Tensor& b) {
    detail::check_same_shape(a, b, "add");
    auto out = detail::op_node(a->rows, a->cols, {a, b});
    out->arr() = a->arr() + b->arr();
    Tensor ow = out;
    out->backward_fn = [a, b, ow]() {
        if (a->requires_grad) { a->ensure_grad(); a->garr() += ow->garr(); }
        if (b->requires_grad) { b->ensure_grad(); b->garr() += ow->garr(); }
    };
    return out;
}

inline Tensor sub(const Tensor& a, const Tensor& b) {
    detail::check_same_shape(a, b, "sub");
    auto out = detail::op_node(a->rows, a->cols, {a, b});
    out->arr() = a->arr() - b->arr();
    Tensor ow = out;
    out->backward_fn = [a, b, ow]() {
        if (a->requires_grad) { a->ensure_grad(); a->garr() += ow->garr(); }
        if (b->requires_grad) { b->ensure_grad(); b->garr() -= ow->garr(); }
    };
    return out;
}

inline Tensor mul(const Tensor& a, const Tensor& b) {
    detail::check_same_shape(a, b, "mul");
    auto out = detail::op_node(a->rows, a->cols, {a, b});
    out->arr() = a->arr() * b->arr();
    Tensor ow = out;
    out->backward_fn = [a, b, ow]() {
        if (a->requires_grad) { a->ensure_grad(); a->garr() += ow->garr() * b->arr(); }
        if (b->requires_grad) { b->ensure_grad(); b->garr() += ow->garr() * a->arr(); }
    };
    return out;
}

/// M + r with the row vector r broadcast over every row of M.
inline Tensor add_row(const Tensor& m, const Tensor& r) {
    detail::check_row_vector(r, m->cols, "add_row");
    auto out = detail::op_node(m->rows, m->cols, {m, r});
    out->mat() = m->mat().rowwise() + r->mat().row(0);
    Tensor ow = out;
    out->backward_fn = [m, r, ow]() {
        if (m->requires_grad) { m->ensure_grad(); m->garr() += ow->garr(); }
        if (r->requires_grad) {
            r->ensure_grad();
            r->gmat().row(0) += ow->gmat().colwise().sum();
        }
    };
    return out;
}

/// M - r with row broadcast.
inline Tensor sub_row(const Tensor& m, const Tensor& r) {
    detail::check_row_vector(r, m->cols, "sub_row");
    auto out = detail::op_node(m->rows, m->cols, {m, r});
    out->mat() = m->mat().rowwise() - r->mat().row(0);
    Tensor ow = out;
    out->backward_fn = [m, r, ow]() {
        if (m->requires_grad) { m->ensure_grad(); m->garr() += ow->garr(); }
        if (r->requires_grad) {
            r->ensure_grad();
            r->gmat().row(0) -= ow->gmat().colwise().sum();
        }
    };
    return out;
}

/// M * r elementwise with row broadcast.
inline Tensor mul_row(const Tensor& m, const Tensor& r) {
    detail::check_row_vector(r, m->cols, "mul_row");
    auto out = detail::op_node(m->rows, m->cols, {m, r});
    out->mat() = m->mat().array().rowwise() * r->mat().row(0).array();
    Tensor ow = out;
    out->backward_fn = [m, r, ow]() {
        if (m->requires_grad) {
            m->ensure_grad();
            m->gmat().array() += ow->gmat().array().rowwise() * r->mat().row(0).array();
        }
        if (r->requires_grad) {
            r->ensure_grad();
            r->gmat().row(0) +=
                (ow->gmat().array() * m->mat().array()).colwise().sum().matrix();
        }
    };
    return out;
}

/// a*x + b elementwise with scalar constants.
inline Tensor affine(const Tensor& x, double a, double b) {
    auto out = detail::op_node(x->rows, x->cols, {x});
    out->arr() = a * x->arr() + b;
    Tensor ow = out;
    out->backward_fn = [x, a, ow]() {
        if (x->requires_grad) { x->ensure_grad(); x->garr() += a * ow->garr(); }
    };
    return out;
}

inline Tensor scale(const Tensor& x, double a) { return affine(x, a, 0.0); }

inline Tensor square(const Tensor& x) {
    auto out = detail::op_node(x->rows, x->cols, {x});
    out->arr() = x->arr().square();
    Tensor ow = out;
    out->backward_fn = [x, ow]() {
        if (x->requires_grad) { x->ensure_grad(); x->garr() += 2.0 * x->arr() * ow->garr(); }
    };
    return out;
}

// ---------------------------------------------------------------------------
// Linear algebra
// ---------------------------------------------------------------------------

/// A[m x k] @ B[k x n] -> [m x n].
inline Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a->cols != b->rows)
        throw std::invalid_argument("tensor: inner dimension mismatch in matmul");
    auto out = detail::op_node(a->rows, b->cols, {a, b});
    out->mat().noalias() = a->mat() * b->mat();
    Tensor ow = out;
    out->backward_fn = [a, b, ow]() {
        if (a->requires_grad) {
            a->ensure_grad();
            a->gmat().noalias() += ow->gmat() * b->mat().transpose();
        }
        if (b->requires_grad) {
            b->ensure_grad();
            b->gmat().noalias() += a->mat().transpose() * ow->gmat();
        }
    };
    return out;
}

/// Dot product of two row vectors (1 x n) -> scalar.
inline Tensor dot(const Tensor& a, const Tensor& b) {
    detail::check_same_shape(a, b, "dot");
    if (a->rows != 1) throw std::invalid_argument("tensor: dot expects row vectors");
    auto out = detail::op_node(1, 1, {a, b});
    out->value[0] = (a->arr() * b->arr()).sum();
    Tensor ow = out;
    out->backward_fn = [a, b, ow]() {
        const double g = ow->grad[0];
        if (a->requires_grad) { a->ensure_grad(); a->garr() += g * b->arr(); }
        if (b->requires_grad) { b->ensure_grad(); b->garr() += g * a->arr(); }
    };
    return out;
}

/// Sum of absolute values -> scalar. Subgradient at 0 is taken as 0.
inline Tensor l1_norm(const Tensor& x) {
    auto out = detail::op_node(1, 1, {x});
    out->value[0] = x->arr().abs().sum();
    Tensor ow = out;
    out->backward_fn = [x, ow]() {
        if (!x->requires_grad) return;
        x->ensure_grad();
        x->garr() += ow->grad[0] * x->arr().sign();
    };
    return out;
}

// ---------------------------------------------------------------------------
// Nonlinearities
// ---------------------------------------------------------------------------

inline Tensor relu(const Tensor& x) {
    auto out = detail::op_node(x->rows, x->cols, {x});
    out->arr() = x->arr().max(0.0);
    Tensor ow = out;
    out->backward_fn = [x, ow]() {
        if (!x->requires_grad) return;
        x->ensure_grad();
        x->garr() += (x->arr() > 0.0).cast<double>() * ow->garr();
    };
    return out;
}

inline Tensor sigmoid(const Tensor& x) {
    auto out = detail::op_node(x->rows, x->cols, {x});
    // Stable two-branch logistic.
    const auto xa = x->arr();
    out->arr() = (xa >= 0.0).select(1.0 / (1.0 + (-xa).exp()),
                                    xa.exp() / (1.0 + xa.exp()));
    Tensor ow = out;
    out->backward_fn = [x, ow]() {
        if (!x->requires_grad) return;
        x->ensure_grad();
        const auto s = ow->arr();
        x->garr() += s * (1.0 - s) * ow->garr();
    };
    return out;
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

inline Tensor sum_all(const Tensor& x) {
    auto out = detail::op_node(1, 1, {x});
    out->value[0] = x->arr().sum();
    Tensor ow = out;
    out->backward_fn = [x, ow]() {
        if (!x->requires_grad) return;
        x->ensure_grad();
        x->garr() += ow->grad[0];
    };
    return out;
}

inline Tensor mean_all(const Tensor& x) {
    auto out = detail::op_node(1, 1, {x});
    const double inv = 1.0 / static_cast<double>(x->size());
    out->value[0] = x->arr().sum() * inv;
    Tensor ow = out;
    out->backward_fn = [x, inv, ow]() {
        if (!x->requires_grad) return;
        x->ensure_grad();
        x->garr() += ow->grad[0] * inv;
    };
    return out;
}

// ---------------------------------------------------------------------------
// Fused softmax cross-entropy
// ---------------------------------------------------------------------------

/// Mean over the batch of -log softmax(logits)[label]. Max-subtracted for
/// stability; rejects non-finite logits outright.
inline Tensor softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels) {
    const long b = logits->rows;
    const long c = logits->cols;
    if (static_cast<long>(labels.size()) != b)
        throw std::invalid_argument("tensor: label count does not match batch");
    for (int y : labels)
        if (y < 0 || y >= c) throw std::invalid_argument("tensor: label out of range");
    if (!logits->arr().isFinite().all())
        throw std::runtime_error("tensor: non-finite logits in softmax_cross_entropy");

    auto out = detail::op_node(1, 1, {logits});
    // Keep softmax probabilities alive for the backward pass.
    auto probs = std::make_shared<MatRM>(b, c);
    auto lm = logits->mat();
    double loss = 0.0;
    for (long i = 0; i < b; ++i) {
        const double mx = lm.row(i).maxCoeff();
        Eigen::ArrayXd e = (lm.row(i).array() - mx).exp();
        const double z = e.sum();
        probs->row(i) = (e / z).matrix();
        loss -= std::log((*probs)(i, labels[static_cast<std::size_t>(i)]));
    }
    out->value[0] = loss / static_cast<double>(b);
    Tensor ow = out;
    out->backward_fn = [logits, labels, probs, b, ow]() {
        if (!logits->requires_grad) return;
        logits->ensure_grad();
        const double g = ow->grad[0] / static_cast<double>(b);
        auto gm = logits->gmat();
        for (long i = 0; i < b; ++i) {
            gm.row(i) += g * probs->row(i);
            gm(i, labels[static_cast<std::size_t>(i)]) -= g;
        }
    };
    return out;
}

// ---------------------------------------------------------------------------
// Backward pass
// ---------------------------------------------------------------------------

/// Reverse-mode sweep from a scalar root. Gradients accumulate (+=) into
/// every reachable node that requires them; callers zero parameter grads
/// (the optimizer does this after each step).
inline void backward(const Tensor& root) {
    if (root->size() != 1)
        throw std::logic_error("tensor: backward requires a scalar root");
    // Iterative post-order DFS for the topological order.
    std::vector<TensorNode*> order;
    std::unordered_set<TensorNode*> seen;
    std::vector<std::pair<TensorNode*, std::size_t>> stack;
    stack.emplace_back(root.get(), 0);
    seen.insert(root.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            TensorNode* p = node->parents[next++].get();
            if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    root->ensure_grad();
    root->grad[0] += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if ((*it)->backward_fn) (*it)->backward_fn();
    }
}

}  // namespace compfs
