#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "compfs/rng.hpp"
#include "compfs/tensor.hpp"

namespace compfs {

/// Dense layer y = x W + b with W stored input-major ([in x out]).
struct Linear {
    Tensor W;
    Tensor b;

    Linear() = default;
    Linear(long in, long out, const std::string& name) {
        W = parameter(in, out, name + ".W");
        b = parameter(1, out, name + ".b");
    }

    /// Kaiming-uniform fan-in initialization, zero bias.
    void init(Rng& rng) {
        const double bound = std::sqrt(6.0 / static_cast<double>(W->rows));
        for (auto& w : W->value) w = rng.uniform(-bound, bound);
        std::fill(b->value.begin(), b->value.end(), 0.0);
    }

    Tensor forward(const Tensor& x) const { return add_row(matmul(x, W), b); }

    void collect(std::vector<Tensor>& out) const {
        out.push_back(W);
        out.push_back(b);
    }
};

/// Adam with bias correction. The learning rate is mutable so the trainer
/// can apply its per-epoch decay; gradients are zeroed after every step.
class Adam {
public:
    explicit Adam(std::vector<Tensor> params, double lr,
                  double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
        states_.resize(params_.size());
        for (std::size_t i = 0; i < params_.size(); ++i) {
            const auto n = static_cast<std::size_t>(params_[i]->size());
            states_[i].m.assign(n, 0.0);
            states_[i].v.assign(n, 0.0);
        }
    }

    void set_lr(double lr) { lr_ = lr; }
    double lr() const { return lr_; }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
        for (std::size_t i = 0; i < params_.size(); ++i) {
            auto& p = *params_[i];
            p.ensure_grad();
            auto& st = states_[i];
            const std::size_t n = st.m.size();
            for (std::size_t k = 0; k < n; ++k) {
                const double g = p.grad[k];
                st.m[k] = beta1_ * st.m[k] + (1.0 - beta1_) * g;
                st.v[k] = beta2_ * st.v[k] + (1.0 - beta2_) * g * g;
                const double mhat = st.m[k] / bc1;
                const double vhat = st.v[k] / bc2;
                p.value[k] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
            }
            p.zero_grad();
        }
    }

    long steps_taken() const { return t_; }

private:
    struct State {
        std::vector<double> m, v;
    };
    std::vector<Tensor> params_;
    std::vector<State> states_;
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
};

}  // namespace compfs
