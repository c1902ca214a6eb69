#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compfs/datasets.hpp"
#include "compfs/metrics.hpp"
#include "compfs/model.hpp"
#include "compfs/objective.hpp"

namespace compfs {

struct TrainConfig {
    long epochs = 35;
    long batch_size = 50;
    double learning_rate = 0.003;
    double lr_decay = 0.99;  // applied once per epoch
    std::uint64_t seed = 1;
    LossWeights weights;
    ModelConfig model;
};

struct TrainResult {
    CompFSModel model;
    std::vector<double> epoch_loss;  // mean total loss per epoch
};

/// Metrics of one trained model on one test split.
struct EvalResult {
    double accuracy = 0.0;
    double tpr = 0.0;
    double fdr = 0.0;
    double g_sim = 0.0;
    long n_groups = 0;
    GroupStructure discovered;
};

/// End-to-end joint training: per-epoch reshuffled minibatches (final
/// partial batch kept), fresh relaxed-gate noise per sample, Adam with
/// per-epoch learning-rate decay. The seed fully determines the run; the
/// init / shuffle / gate-noise substreams are independent so that e.g.
/// changing the learner count cannot perturb data order.
TrainResult train(const TrainConfig& cfg, const LabeledDataset& data);

/// Same loop on a caller-prepared model (already initialized). With
/// train_gates=false the gate logits are excluded from the optimizer —
/// the frozen-gate path used by the oracle baseline.
TrainResult train_model(const TrainConfig& cfg, const LabeledDataset& data,
                        CompFSModel model, bool train_gates);

/// Accuracy under the hard-gated evaluation pass, plus the selection metrics
/// when the dataset carries a ground-truth structure.
EvalResult evaluate(const CompFSModel& model, const LabeledDataset& test,
                    const GroupStructure* truth);

}  // namespace compfs
