#pragma once

#include <cstdint>

#include "compfs/datasets.hpp"
#include "compfs/trainer.hpp"

namespace compfs {

/// L1-regularized linear softmax classifier with magnitude pruning.
struct LinearModel {
    Tensor W;  // [p x classes]
    Tensor b;  // [1 x classes]
    double relevance_threshold = 0.01;

    std::vector<int> selected() const;        // features with an unpruned weight
    void prune();                             // zero columns below the threshold
    std::vector<int> predict(const Tensor& x) const;
};

struct OracleResult {
    CompFSModel model;
    EvalResult eval;
};

struct LassoConfig {
    long epochs = 8;
    long batch_size = 50;
    double learning_rate = 0.003;
    double lr_decay = 0.99;
    double reg = 0.4;  // published L1 scale; the per-step coefficient is reg/sqrt(batch)
    std::uint64_t seed = 1;
};

struct LassoResult {
    LinearModel model;
    EvalResult eval;
};

/// Oracle baseline: a single-learner model whose gate is frozen open exactly
/// on the union of the ground-truth features and closed elsewhere; encoder
/// and heads train normally. Its reported structure is that union as one
/// group, so TPR=1 and FDR=0 by construction.
OracleResult train_oracle(const LabeledDataset& train_data, const LabeledDataset& test_data,
                          const TrainConfig& cfg);

/// LASSO baseline: linear softmax classifier, Adam on cross-entropy plus an
/// L1 weight penalty, then hard pruning at |w| > threshold. Features keeping
/// any class weight form one reported group (none if all pruned).
LassoResult train_lasso(const LabeledDataset& train_data, const LabeledDataset& test_data,
                        const LassoConfig& cfg);

}  // namespace compfs
