#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "compfs/datasets.hpp"
#include "compfs/trainer.hpp"

using namespace compfs;

namespace {

TrainConfig tiny_cfg(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.model.p = 10;
    cfg.model.n_learners = 2;
    cfg.model.hidden = 8;
    cfg.epochs = 5;
    cfg.batch_size = 32;
    cfg.learning_rate = 0.003;
    cfg.lr_decay = 0.99;
    cfg.seed = seed;
    cfg.weights.beta = 0.5;
    cfg.weights.beta_e = 1.0;
    cfg.weights.beta_r = 0.5;
    return cfg;
}

bool same_parameters(const CompFSModel& a, const CompFSModel& b) {
    auto pa = a.parameters(), pb = b.parameters();
    if (pa.size() != pb.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (pa[i]->value != pb[i]->value) return false;
    return true;
}

}  // namespace

TEST_CASE("zero epochs returns the initialized model untouched") {
    TrainConfig cfg = tiny_cfg(3);
    cfg.epochs = 0;
    LabeledDataset data = gen_syn(SynTask::Syn1, 64, 10, 5);
    TrainResult tr = train(cfg, data);
    CHECK(tr.epoch_loss.empty());

    CompFSModel fresh(cfg.model);
    Rng rng(cfg.seed, Rng::kInit);
    fresh.init(rng);
    CHECK(same_parameters(tr.model, fresh));
    // Feature means are still frozen in.
    CHECK(tr.model.feature_means()->value.size() == 10u);
}

TEST_CASE("training is deterministic given the seed") {
    TrainConfig cfg = tiny_cfg(11);
    cfg.epochs = 2;
    LabeledDataset data = gen_syn(SynTask::Syn1, 200, 10, 7);
    TrainResult a = train(cfg, data);
    TrainResult b = train(cfg, data);
    CHECK(same_parameters(a.model, b.model));
    CHECK(a.epoch_loss == b.epoch_loss);

    cfg.seed = 12;
    TrainResult c = train(cfg, data);
    CHECK(!same_parameters(a.model, c.model));
}

TEST_CASE("loss history shrinks and the model learns a simple rule") {
    TrainConfig cfg = tiny_cfg(1);
    // The hard-gated evaluation pass stays at chance until the relevant
    // selection probabilities clear the group threshold, which needs the
    // full epoch budget on this small problem.
    cfg.epochs = 35;
    LabeledDataset train_data = gen_syn(SynTask::Syn1, 1500, 10, 21);
    LabeledDataset test_data = gen_syn(SynTask::Syn1, 300, 10, 22);
    TrainResult tr = train(cfg, train_data);
    REQUIRE(tr.epoch_loss.size() == 35u);
    for (double l : tr.epoch_loss) CHECK(std::isfinite(l));
    CHECK(tr.epoch_loss.back() < tr.epoch_loss.front());
    EvalResult ev = evaluate(tr.model, test_data, &test_data.truth);
    CHECK(ev.accuracy > 0.8);
}

TEST_CASE("partial final batch is kept") {
    TrainConfig cfg = tiny_cfg(5);
    cfg.epochs = 1;
    cfg.batch_size = 64;  // larger than the dataset: one partial batch
    LabeledDataset data = gen_syn(SynTask::Syn1, 40, 10, 9);
    TrainResult tr = train(cfg, data);
    CHECK(tr.epoch_loss.size() == 1u);
    CHECK(std::isfinite(tr.epoch_loss[0]));
}

TEST_CASE("frozen gates stay exactly at their starting values") {
    TrainConfig cfg = tiny_cfg(13);
    cfg.epochs = 2;
    LabeledDataset data = gen_syn(SynTask::Syn1, 200, 10, 15);

    CompFSModel model(cfg.model);
    Rng rng(cfg.seed, Rng::kInit);
    model.init(rng);
    std::vector<std::vector<double>> alpha0;
    for (long i = 0; i < cfg.model.n_learners; ++i)
        alpha0.push_back(model.gates().alpha(i)->value);
    std::vector<double> enc0 = model.parameters()[2]->value;  // first non-gate tensor

    TrainResult tr = train_model(cfg, data, std::move(model), false);
    for (long i = 0; i < cfg.model.n_learners; ++i)
        CHECK(tr.model.gates().alpha(i)->value == alpha0[static_cast<std::size_t>(i)]);
    CHECK(tr.model.parameters()[2]->value != enc0);  // the rest trained
}

TEST_CASE("width mismatch and empty data are rejected") {
    TrainConfig cfg = tiny_cfg(1);
    LabeledDataset data = gen_syn(SynTask::Syn1, 32, 12, 3);  // p=12 vs config 10
    CHECK_THROWS(train(cfg, data));
    LabeledDataset empty;
    empty.p = 10;
    CHECK_THROWS(train(cfg, empty));
}

TEST_CASE("non-finite loss aborts with coordinates") {
    TrainConfig cfg = tiny_cfg(2);
    cfg.epochs = 1;
    LabeledDataset data = gen_syn(SynTask::Syn1, 32, 10, 3);
    data.X[3] = std::numeric_limits<double>::quiet_NaN();
    try {
        train(cfg, data);
        FAIL("expected a runtime error");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.find("epoch") != std::string::npos);
        CHECK(what.find("batch") != std::string::npos);
    }
}

TEST_CASE("evaluate fills metrics only when truth is present") {
    TrainConfig cfg = tiny_cfg(4);
    cfg.epochs = 1;
    LabeledDataset data = gen_syn(SynTask::Syn1, 100, 10, 17);
    TrainResult tr = train(cfg, data);
    EvalResult no_truth = evaluate(tr.model, data, nullptr);
    CHECK(no_truth.tpr == 0.0);
    CHECK(no_truth.fdr == 0.0);
    CHECK(no_truth.g_sim == 0.0);
    CHECK(no_truth.accuracy > 0.0);
    EvalResult with_truth = evaluate(tr.model, data, &data.truth);
    CHECK(with_truth.accuracy == no_truth.accuracy);
    CHECK(with_truth.n_groups == static_cast<long>(with_truth.discovered.size()));
    CHECK_THROWS(evaluate(tr.model, LabeledDataset{}, nullptr));
}
