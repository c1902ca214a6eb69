#pragma once

#include <stdexcept>
#include <vector>

#include "compfs/model.hpp"
#include "compfs/tensor.hpp"

namespace compfs {

/// Loss balance hyperparameters, used exactly as stored.
///
/// `warmup` delays the overlap penalty: for the first `warmup` epochs only
/// the task losses and the sparsity pressure act, so uninformative gates
/// drift shut and multi-feature interactions get time to latch before any
/// cross-learner pressure exists. Once the gate vectors are sparse, the
/// overlap term only touches features that two learners actually hold, and
/// it resolves those contests instead of indiscriminately closing
/// half-open gates everywhere (which is what it does when applied from the
/// first step, where every pair of fresh gate vectors overlaps on all p
/// features at once).
struct LossWeights {
    double beta = 4.5;    // sparsity pressure on mean selection probability
    double beta_e = 1.0;  // ensemble loss weight
    double beta_r = 1.2;  // inter-group overlap pressure
    long warmup = 10;     // epochs before the overlap term activates
};

/// Per-learner loss: cross-entropy of the group head plus the squared mean
/// selection probability. The L2-on-the-mean form (not L1 on the entries)
/// makes adding a feature to an already-large group cost more than opening a
/// fresh small group.
inline Tensor group_loss(const Tensor& logits, const std::vector<int>& labels,
                         const Tensor& pi, double beta) {
    Tensor ce = softmax_cross_entropy(logits, labels);
    Tensor penalty = scale(square(mean_all(pi)), beta);
    return add(ce, penalty);
}

/// Plain task loss on the aggregate predictor.
inline Tensor ensemble_loss(const Tensor& ensemble_logits, const std::vector<int>& labels) {
    return softmax_cross_entropy(ensemble_logits, labels);
}

/// Features below this selection probability do not take part in the
/// overlap contest: a learner only pays for features it currently holds.
constexpr double kOverlapGate = 0.5;

/// Pairwise selection overlap over jointly held features:
/// sum_{i<j} sum_k pi_i(k) * pi_j(k) * [pi_i(k) > nu] * [pi_j(k) > nu].
/// The indicator is evaluated on the current probabilities and treated as a
/// constant, so the gradient lands only on features both learners hold.
/// Without the indicator every pair of fresh gate vectors overlaps on all p
/// features at once and the term shuts half-open gates wholesale before any
/// of them can learn whether its feature matters.
inline Tensor overlap_loss(const std::vector<Tensor>& pi, double nu = kOverlapGate) {
    if (pi.empty()) throw std::invalid_argument("overlap_loss: need at least one learner");
    Tensor total;
    bool have = false;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        for (std::size_t j = i + 1; j < pi.size(); ++j) {
            const auto& a = pi[i]->value;
            const auto& b = pi[j]->value;
            std::vector<double> m(a.size(), 0.0);
            bool any = false;
            for (std::size_t k = 0; k < m.size(); ++k)
                if (a[k] > nu && b[k] > nu) {
                    m[k] = 1.0;
                    any = true;
                }
            if (!any) continue;  // nothing jointly held by this pair
            Tensor mask = constant(pi[i]->rows, pi[i]->cols, m);
            Tensor d = dot(mul(pi[i], mask), pi[j]);
            total = have ? add(total, d) : d;
            have = true;
        }
    }
    if (!have) return constant_scalar(0.0);
    return total;
}

/// Full objective at a given training epoch: sum of per-learner losses,
/// weighted ensemble loss, and — once past the warmup — the weighted
/// overlap penalty. The overlap weight is divided by the number of rivals
/// (N-1) so the pressure one learner feels on a contested feature does not
/// grow with the ensemble size; as rivals release a feature the pressure on
/// the remaining holders fades, which lets the contest settle at exactly
/// one holder instead of stampeding everyone off the feature.
inline Tensor total_loss(const ForwardOut& fwd, const std::vector<int>& labels,
                         const LossWeights& w, long epoch) {
    Tensor loss = scale(ensemble_loss(fwd.ensemble_logits, labels), w.beta_e);
    for (std::size_t i = 0; i < fwd.group_logits.size(); ++i)
        loss = add(loss, group_loss(fwd.group_logits[i], labels, fwd.pi[i], w.beta));
    const std::size_t n = fwd.pi.size();
    if (epoch >= w.warmup && w.beta_r != 0.0 && n > 1) {
        Tensor ov = overlap_loss(fwd.pi);
        if (ov->requires_grad || ov->scalar() != 0.0)
            loss = add(loss, scale(ov, w.beta_r / static_cast<double>(n - 1)));
    }
    return loss;
}

}  // namespace compfs
