#include "compfs/baselines.hpp"

#include <cmath>
#include <numeric>

#include "compfs/nn.hpp"
#include "compfs/rng.hpp"

namespace compfs {

std::vector<int> LinearModel::selected() const {
    std::vector<int> out;
    auto wm = W->mat();
    for (long f = 0; f < W->rows; ++f) {
        double mx = 0.0;
        for (long c = 0; c < W->cols; ++c) mx = std::max(mx, std::abs(wm(f, c)));
        if (mx > relevance_threshold) out.push_back(static_cast<int>(f));
    }
    return out;
}

void LinearModel::prune() {
    auto wm = W->mat();
    for (long f = 0; f < W->rows; ++f) {
        double mx = 0.0;
        for (long c = 0; c < W->cols; ++c) mx = std::max(mx, std::abs(wm(f, c)));
        if (mx <= relevance_threshold) wm.row(f).setZero();
    }
}

std::vector<int> LinearModel::predict(const Tensor& x) const {
    Tensor logits = add_row(matmul(x, W), b);
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

OracleResult train_oracle(const LabeledDataset& train_data, const LabeledDataset& test_data,
                          const TrainConfig& cfg) {
    if (train_data.truth.empty())
        throw std::invalid_argument("train_oracle: dataset has no ground truth");
    TrainConfig oc = cfg;
    oc.model.n_learners = 1;
    oc.weights.beta = 0.0;   // no sparsity pressure on a frozen gate
    oc.weights.beta_r = 0.0;

    Rng init_rng(oc.seed, Rng::kInit);
    CompFSModel model(oc.model);
    model.init(init_rng);

    // Saturated logits make the relaxed mask exactly 0/1 in double precision
    // for any noise draw, and the hard mask matches.
    const auto members = train_data.truth.flat_union();
    auto& alpha = model.gates().alpha(0);
    for (long k = 0; k < oc.model.p; ++k)
        alpha->value[static_cast<std::size_t>(k)] =
            members.count(static_cast<int>(k)) ? 25.0 : -25.0;

    OracleResult out;
    TrainResult tr = train_model(oc, train_data, std::move(model), false);
    out.model = std::move(tr.model);

    out.eval = evaluate(out.model, test_data, &train_data.truth);
    // The oracle reports the whole union as one group regardless of how the
    // gate bank would render it.
    std::vector<int> u(members.begin(), members.end());
    out.eval.discovered = GroupStructure({u});
    out.eval.n_groups = 1;
    const TprFdr t = tpr_fdr(train_data.truth, out.eval.discovered);
    out.eval.tpr = t.tpr;
    out.eval.fdr = t.fdr;
    out.eval.g_sim = g_sim(train_data.truth, out.eval.discovered);
    return out;
}

LassoResult train_lasso(const LabeledDataset& train_data, const LabeledDataset& test_data,
                        const LassoConfig& cfg) {
    const long p = train_data.p;
    const long classes = 2;

    Rng init_rng(cfg.seed, Rng::kInit);
    Rng shuffle_rng(cfg.seed, Rng::kShuffle);

    LassoResult out;
    out.model.W = parameter(p, classes, "lasso.W");
    out.model.b = parameter(1, classes, "lasso.b");
    {
        const double bound = std::sqrt(6.0 / static_cast<double>(p));
        for (auto& w : out.model.W->value) w = init_rng.uniform(-bound, bound);
    }

    Adam opt({out.model.W, out.model.b}, cfg.learning_rate);
    // Published Reg values pair with mean-reduced cross-entropy; dividing by
    // sqrt(batch) puts the penalty on the scale of the per-batch gradient
    // noise floor, which reproduces the published selections across the
    // different batch sizes in use.
    const double l1_coeff = cfg.reg / std::sqrt(static_cast<double>(cfg.batch_size));

    std::vector<long> order(static_cast<std::size_t>(train_data.n));
    std::iota(order.begin(), order.end(), 0L);

    for (long epoch = 0; epoch < cfg.epochs; ++epoch) {
        opt.set_lr(cfg.learning_rate * std::pow(cfg.lr_decay, static_cast<double>(epoch)));
        shuffle_rng.shuffle(order);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const long bsz = static_cast<long>(stop - start);
            auto x = make_node(bsz, p, false);
            std::vector<int> yb;
            yb.reserve(stop - start);
            for (long r = 0; r < bsz; ++r) {
                const long src = order[start + static_cast<std::size_t>(r)];
                const double* s = train_data.X.data() + static_cast<std::size_t>(src) * p;
                std::copy(s, s + p, x->value.begin() + static_cast<std::size_t>(r) * p);
                yb.push_back(train_data.y[static_cast<std::size_t>(src)]);
            }
            Tensor logits = add_row(matmul(x, out.model.W), out.model.b);
            Tensor loss = add(softmax_cross_entropy(logits, yb),
                              scale(l1_norm(out.model.W), l1_coeff));
            if (!std::isfinite(loss->scalar()))
                throw std::runtime_error("train_lasso: non-finite loss at epoch " +
                                         std::to_string(epoch));
            backward(loss);
            opt.step();
        }
    }

    out.model.prune();
    const auto sel = out.model.selected();

    Tensor xt = constant(test_data.n, test_data.p, test_data.X);
    out.eval.accuracy = accuracy(out.model.predict(xt), test_data.y);
    out.eval.discovered =
        sel.empty() ? GroupStructure() : GroupStructure({sel});
    out.eval.n_groups = static_cast<long>(out.eval.discovered.size());
    if (!train_data.truth.empty()) {
        const TprFdr t = tpr_fdr(train_data.truth, out.eval.discovered);
        out.eval.tpr = t.tpr;
        out.eval.fdr = t.fdr;
        out.eval.g_sim = g_sim(train_data.truth, out.eval.discovered);
    }
    return out;
}

}  // namespace compfs
