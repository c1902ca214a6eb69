#include "compfs/trainer.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "compfs/nn.hpp"
#include "compfs/rng.hpp"

namespace compfs {

namespace {

/// Column means of the training matrix (frozen imputation values).
std::vector<double> feature_means(const LabeledDataset& data) {
    std::vector<double> mean(static_cast<std::size_t>(data.p), 0.0);
    for (long r = 0; r < data.n; ++r) {
        const double* row = data.X.data() + static_cast<std::size_t>(r) * data.p;
        for (long c = 0; c < data.p; ++c) mean[static_cast<std::size_t>(c)] += row[c];
    }
    const double inv = 1.0 / static_cast<double>(data.n);
    for (auto& m : mean) m *= inv;
    return mean;
}

Tensor gather_rows(const LabeledDataset& data, const std::vector<long>& idx,
                   std::size_t begin, std::size_t end) {
    const long b = static_cast<long>(end - begin);
    auto t = make_node(b, data.p, false);
    for (long r = 0; r < b; ++r) {
        const long src = idx[begin + static_cast<std::size_t>(r)];
        const double* s = data.X.data() + static_cast<std::size_t>(src) * data.p;
        std::copy(s, s + data.p,
                  t->value.begin() + static_cast<std::size_t>(r) * data.p);
    }
    return t;
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const LabeledDataset& data) {
    Rng init_rng(cfg.seed, Rng::kInit);
    CompFSModel model(cfg.model);
    model.init(init_rng);
    return train_model(cfg, data, std::move(model), true);
}

TrainResult train_model(const TrainConfig& cfg, const LabeledDataset& data,
                        CompFSModel model, bool train_gates) {
    if (data.n < 1) throw std::invalid_argument("train: empty training split");
    if (data.p != cfg.model.p)
        throw std::invalid_argument("train: dataset width does not match model config");

    Rng shuffle_rng(cfg.seed, Rng::kShuffle);
    Rng noise_rng(cfg.seed, Rng::kGateNoise);

    TrainResult out;
    out.model = std::move(model);
    out.model.set_feature_means(feature_means(data));

    std::vector<Tensor> trainable;
    for (auto& t : out.model.parameters()) {
        if (!train_gates && t->name.rfind("gate.", 0) == 0) {
            t->requires_grad = false;  // frozen: drop from graph and optimizer
            continue;
        }
        trainable.push_back(t);
    }
    Adam opt(std::move(trainable), cfg.learning_rate);

    std::vector<long> order(static_cast<std::size_t>(data.n));
    std::iota(order.begin(), order.end(), 0L);

    const long n_learners = cfg.model.n_learners;
    for (long epoch = 0; epoch < cfg.epochs; ++epoch) {
        opt.set_lr(cfg.learning_rate *
                   std::pow(cfg.lr_decay, static_cast<double>(epoch)));
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        long batches = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            Tensor x = gather_rows(data, order, start, stop);
            std::vector<int> yb;
            yb.reserve(stop - start);
            for (std::size_t k = start; k < stop; ++k)
                yb.push_back(data.y[static_cast<std::size_t>(order[k])]);

            std::vector<Tensor> noise;
            noise.reserve(static_cast<std::size_t>(n_learners));
            for (long i = 0; i < n_learners; ++i)
                noise.push_back(sample_gate_noise(noise_rng, x->rows, data.p));

            Tensor loss;
            try {
                ForwardOut fwd = out.model.forward_train(x, noise);
                loss = total_loss(fwd, yb, cfg.weights, epoch);
            } catch (const std::runtime_error& e) {
                // Numeric guards inside the ops (e.g. non-finite logits)
                // carry no position; add the coordinates before surfacing.
                throw std::runtime_error("train: aborted at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batches) + ": " + e.what());
            }
            const double lv = loss->scalar();
            if (!std::isfinite(lv))
                throw std::runtime_error("train: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batches));
            backward(loss);
            opt.step();
            loss_sum += lv;
            ++batches;
        }
        out.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
    }
    return out;
}

EvalResult evaluate(const CompFSModel& model, const LabeledDataset& test,
                    const GroupStructure* truth) {
    if (test.n < 1) throw std::invalid_argument("evaluate: empty test split");
    EvalResult r;
    Tensor x = constant(test.n, test.p, test.X);
    r.accuracy = accuracy(model.predict(x), test.y);
    r.discovered = model.discovered_groups();
    r.n_groups = static_cast<long>(r.discovered.size());
    if (truth != nullptr) {
        const TprFdr t = tpr_fdr(*truth, r.discovered);
        r.tpr = t.tpr;
        r.fdr = t.fdr;
        r.g_sim = g_sim(*truth, r.discovered);
    }
    return r;
}

}  // namespace compfs
