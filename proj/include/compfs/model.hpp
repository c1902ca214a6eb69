#pragma once

#include <string>
#include <vector>

#include "compfs/gates.hpp"
#include "compfs/nn.hpp"
#include "compfs/metrics.hpp"
#include "compfs/rng.hpp"
#include "compfs/tensor.hpp"

namespace compfs {

struct ModelConfig {
    long p = 500;        // input features
    long n_learners = 5; // ensemble size N
    long hidden = 20;    // encoder width (latent dim equals this)
    long classes = 2;
    double tau = 0.1;    // relaxed-Bernoulli temperature
    double lambda = 0.7; // evaluation threshold on pi

    bool operator==(const ModelConfig& o) const {
        return p == o.p && n_learners == o.n_learners && hidden == o.hidden &&
               classes == o.classes && tau == o.tau && lambda == o.lambda;
    }
};

/// Two-hidden-layer ReLU MLP, linear output: p -> h -> h -> h.
struct Encoder {
    Linear l1, l2, l3;

    Encoder() = default;
    Encoder(long in, long hidden, const std::string& name)
        : l1(in, hidden, name + ".l1"),
          l2(hidden, hidden, name + ".l2"),
          l3(hidden, hidden, name + ".l3") {}

    void init(Rng& rng) {
        l1.init(rng);
        l2.init(rng);
        l3.init(rng);
    }

    Tensor forward(const Tensor& x) const {
        return l3.forward(relu(l2.forward(relu(l1.forward(x)))));
    }

    void collect(std::vector<Tensor>& out) const {
        l1.collect(out);
        l2.collect(out);
        l3.collect(out);
    }
};

/// One training-mode forward pass: ensemble logits, per-learner logits, and
/// the graph-connected selection probabilities for the loss terms.
struct ForwardOut {
    Tensor ensemble_logits;
    std::vector<Tensor> group_logits;
    std::vector<Tensor> pi;
};

/// The composite feature selection ensemble: N weak learners, each a
/// stochastic gate followed by an MLP encoder and a linear head, plus an
/// aggregate predictor that sums separate linear projections of the latents
/// (no further transformation on the sum).
class CompFSModel {
public:
    CompFSModel() = default;

    explicit CompFSModel(const ModelConfig& cfg) : cfg_(cfg) {
        gates_ = GateBank(cfg.n_learners, cfg.p, cfg.tau, cfg.lambda);
        for (long i = 0; i < cfg.n_learners; ++i) {
            const std::string tag = "learner." + std::to_string(i);
            encoders_.emplace_back(cfg.p, cfg.hidden, tag + ".enc");
            heads_.emplace_back(cfg.hidden, cfg.classes, tag + ".head");
            aggregates_.emplace_back(cfg.hidden, cfg.classes, tag + ".agg");
        }
        xbar_ = constant(1, cfg.p, std::vector<double>(static_cast<std::size_t>(cfg.p), 0.0));
    }

    const ModelConfig& config() const { return cfg_; }
    GateBank& gates() { return gates_; }
    const GateBank& gates() const { return gates_; }

    void init(Rng& rng) {
        gates_.init(rng);
        for (long i = 0; i < cfg_.n_learners; ++i) {
            encoders_[static_cast<std::size_t>(i)].init(rng);
            heads_[static_cast<std::size_t>(i)].init(rng);
            aggregates_[static_cast<std::size_t>(i)].init(rng);
        }
    }

    /// Freeze the per-feature means of the training split.
    void set_feature_means(const std::vector<double>& xbar) {
        if (static_cast<long>(xbar.size()) != cfg_.p)
            throw std::invalid_argument("model: xbar width does not match p");
        xbar_ = constant(1, cfg_.p, xbar);
    }

    const Tensor& feature_means() const { return xbar_; }

    /// Training pass with injected gate noise (one [batch x p] logit(u)
    /// constant per learner), so a forward is exactly replayable.
    ForwardOut forward_train(const Tensor& x, const std::vector<Tensor>& logit_u) const {
        if (static_cast<long>(logit_u.size()) != cfg_.n_learners)
            throw std::invalid_argument("model: need one noise tensor per learner");
        ForwardOut out;
        for (long i = 0; i < cfg_.n_learners; ++i) {
            const auto si = static_cast<std::size_t>(i);
            Tensor m = gates_.relaxed_mask(i, logit_u[si]);
            Tensor xt = impute_gate(x, m, xbar_);
            Tensor z = encoders_[si].forward(xt);
            out.group_logits.push_back(heads_[si].forward(z));
            Tensor proj = aggregates_[si].forward(z);
            out.ensemble_logits = (i == 0) ? proj : add(out.ensemble_logits, proj);
            out.pi.push_back(gates_.pi(i));
        }
        return out;
    }

    /// Deterministic evaluation pass: hard gates (pi > lambda), ensemble
    /// logits only.
    Tensor forward_eval(const Tensor& x) const {
        Tensor ens;
        for (long i = 0; i < cfg_.n_learners; ++i) {
            const auto si = static_cast<std::size_t>(i);
            Tensor mask = constant(1, cfg_.p, gates_.hard_mask(i));
            Tensor xt = impute_gate_row(x, mask, xbar_);
            Tensor z = encoders_[si].forward(xt);
            Tensor proj = aggregates_[si].forward(z);
            ens = (i == 0) ? proj : add(ens, proj);
        }
        return ens;
    }

    /// Argmax class predictions under the evaluation pass.
    std::vector<int> predict(const Tensor& x) const {
        Tensor logits = forward_eval(x);
        std::vector<int> out(static_cast<std::size_t>(logits->rows));
        auto lm = logits->mat();
        for (long r = 0; r < logits->rows; ++r) {
            long best = 0;
            for (long c = 1; c < logits->cols; ++c)
                if (lm(r, c) > lm(r, best)) best = c;
            out[static_cast<std::size_t>(r)] = static_cast<int>(best);
        }
        return out;
    }

    /// Discovered structure: per-learner selected sets, deduplicated, empties
    /// dropped (repeated or empty groups are disregarded).
    GroupStructure discovered_groups() const {
        std::vector<std::vector<int>> raw;
        for (long i = 0; i < cfg_.n_learners; ++i) raw.push_back(gates_.selected(i));
        return GroupStructure(raw);
    }

    /// All trainable tensors: gates first, then per-learner encoder, head,
    /// aggregate parameters (deterministic order).
    std::vector<Tensor> parameters() const {
        std::vector<Tensor> out;
        gates_.collect(out);
        for (long i = 0; i < cfg_.n_learners; ++i) {
            const auto si = static_cast<std::size_t>(i);
            encoders_[si].collect(out);
            heads_[si].collect(out);
            aggregates_[si].collect(out);
        }
        return out;
    }

    void save(const std::string& path) const;
    static CompFSModel load(const std::string& path);

private:
    ModelConfig cfg_;
    GateBank gates_;
    std::vector<Encoder> encoders_;
    std::vector<Linear> heads_;
    std::vector<Linear> aggregates_;
    Tensor xbar_;
};

}  // namespace compfs
