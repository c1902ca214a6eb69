#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "compfs/rng.hpp"
#include "compfs/tensor.hpp"

namespace compfs {

/// Per-learner stochastic feature gates. Selection probabilities are
/// parameterized as pi = sigmoid(alpha) with alpha unconstrained, keeping the
/// relaxed-Bernoulli logits finite for any parameter value.
///
/// A relaxed sample is m = sigmoid((alpha + logit(u)) / tau) with
/// u ~ Uniform(0,1); note logit(sigmoid(alpha)) = alpha, so this is exactly
/// the concrete/relaxed-Bernoulli draw written in terms of pi.
class GateBank {
public:
    GateBank() = default;

    GateBank(long n_learners, long p, double tau, double lambda)
        : tau_(tau), lambda_(lambda), p_(p) {
        if (tau <= 0.0) throw std::invalid_argument("gates: tau must be positive");
        if (lambda < 0.0 || lambda > 1.0)
            throw std::invalid_argument("gates: lambda must lie in [0,1]");
        for (long i = 0; i < n_learners; ++i)
            alpha_.push_back(parameter(1, p, "gate." + std::to_string(i) + ".alpha"));
    }

    /// Near-neutral start: alpha ~ U(-0.1, 0.1), i.e. pi ~= 0.5.
    void init(Rng& rng) {
        for (auto& a : alpha_)
            for (auto& v : a->value) v = rng.uniform(-0.1, 0.1);
    }

    long n_learners() const { return static_cast<long>(alpha_.size()); }
    long p() const { return p_; }
    double tau() const { return tau_; }
    double lambda() const { return lambda_; }

    Tensor& alpha(long i) { return alpha_[static_cast<std::size_t>(i)]; }
    const Tensor& alpha(long i) const { return alpha_[static_cast<std::size_t>(i)]; }

    /// Selection probabilities as a graph node (for the loss terms).
    Tensor pi(long i) const { return sigmoid(alpha_[static_cast<std::size_t>(i)]); }

    /// Relaxed Bernoulli mask for one learner given pre-sampled noise
    /// logits (a [batch x p] constant of logit(u) values). Differentiable
    /// w.r.t. alpha; injecting the noise keeps the forward pass replayable
    /// for finite-difference checks.
    Tensor relaxed_mask(long i, const Tensor& logit_u) const {
        if (logit_u->cols != p_)
            throw std::invalid_argument("gates: noise width does not match p");
        return sigmoid(scale(add_row(logit_u, alpha_[static_cast<std::size_t>(i)]), 1.0 / tau_));
    }

    /// Deterministic evaluation mask: 1 where pi > lambda (strict), else 0.
    std::vector<double> hard_mask(long i) const {
        std::vector<double> m(static_cast<std::size_t>(p_), 0.0);
        const auto& a = alpha_[static_cast<std::size_t>(i)]->value;
        for (long k = 0; k < p_; ++k) {
            const double pi_k = 1.0 / (1.0 + std::exp(-a[static_cast<std::size_t>(k)]));
            if (pi_k > lambda_) m[static_cast<std::size_t>(k)] = 1.0;
        }
        return m;
    }

    /// Selected feature indices for one learner (pi > lambda).
    std::vector<int> selected(long i) const {
        std::vector<int> out;
        const auto m = hard_mask(i);
        for (long k = 0; k < p_; ++k)
            if (m[static_cast<std::size_t>(k)] > 0.5) out.push_back(static_cast<int>(k));
        return out;
    }

    void collect(std::vector<Tensor>& out) const {
        for (const auto& a : alpha_) out.push_back(a);
    }

private:
    std::vector<Tensor> alpha_;
    double tau_ = 0.1;
    double lambda_ = 0.7;
    long p_ = 0;
};

/// Sample a [batch x p] constant of logit(u) noise, u ~ U(0,1) clamped to
/// [1e-7, 1-1e-7] so every logit is finite. Scalar draws stay on the seeded
/// engine (deterministic order); the log-ratio is vectorized.
inline Tensor sample_gate_noise(Rng& rng, long batch, long p) {
    auto t = make_node(batch, p, false);
    const double lo = 1e-7, hi = 1.0 - 1e-7;
    for (auto& v : t->value) {
        double u = rng.uniform();
        v = u < lo ? lo : (u > hi ? hi : u);
    }
    auto a = t->arr();
    a = (a / (1.0 - a)).log();
    return t;
}

/// Mean-imputed gating (training path): x_tilde = xbar + m * (x - xbar),
/// i.e. selected coordinates pass through, the rest collapse to the frozen
/// training means.
inline Tensor impute_gate(const Tensor& x, const Tensor& mask, const Tensor& xbar) {
    return add_row(mul(mask, sub_row(x, xbar)), xbar);
}

/// Evaluation path with a fixed binary row mask.
inline Tensor impute_gate_row(const Tensor& x, const Tensor& mask_row, const Tensor& xbar) {
    return add_row(mul_row(sub_row(x, xbar), mask_row), xbar);
}

}  // namespace compfs
