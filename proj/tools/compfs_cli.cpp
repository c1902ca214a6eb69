#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "compfs/experiment.hpp"
#include "compfs/metrics.hpp"

namespace {

struct RunFlags {
    std::string preset, config, out;
    std::string task, model;
    long repeats = -1, epochs = -1, batch = -1, learners = -1, hidden = -1;
    long n_train = -1, n_test = -1;
    double lr = -1, lr_decay = -1, beta = -1, beta_e = -1, beta_r = -1;
    double tau = -1, lambda = -1, reg = -1;
    long seed = -1;
    std::string truth_file;
};

void add_override_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--task", f.task, "Task: syn1..syn4, chem1..chem3, file:<csv>");
    cmd->add_option("--model", f.model, "Model: compfs, compfs1, oracle, lasso");
    cmd->add_option("--repeats", f.repeats, "Independent repeats");
    cmd->add_option("--seed", f.seed, "Base seed (run r uses seed base+r)");
    cmd->add_option("--epochs", f.epochs, "Training epochs");
    cmd->add_option("--batch", f.batch, "Minibatch size");
    cmd->add_option("--lr", f.lr, "Learning rate");
    cmd->add_option("--lr-decay", f.lr_decay, "Per-epoch learning-rate decay");
    cmd->add_option("--learners", f.learners, "Ensemble size");
    cmd->add_option("--hidden", f.hidden, "Encoder width");
    cmd->add_option("--beta", f.beta, "Sparsity weight");
    cmd->add_option("--beta-e", f.beta_e, "Ensemble loss weight");
    cmd->add_option("--beta-r", f.beta_r, "Overlap weight");
    cmd->add_option("--tau", f.tau, "Gate temperature");
    cmd->add_option("--lambda", f.lambda, "Selection threshold");
    cmd->add_option("--reg", f.reg, "L1 scale (lasso model)");
    cmd->add_option("--n-train", f.n_train, "Training rows");
    cmd->add_option("--n-test", f.n_test, "Test rows");
    cmd->add_option("--truth-file", f.truth_file, "Ground-truth groups file (file tasks)");
}

compfs::ExperimentConfig build_config(const RunFlags& f) {
    compfs::ExperimentConfig cfg;
    if (!f.preset.empty()) cfg = compfs::preset(f.preset);
    if (!f.config.empty()) {
        if (!f.preset.empty())
            throw CLI::ValidationError("--preset and --config are mutually exclusive; "
                                       "put a preset= line in the config file instead");
        cfg = compfs::load_config_file(f.config);
    }
    if (!f.task.empty()) cfg.task = f.task;
    if (!f.model.empty()) cfg.model = f.model;
    if (f.repeats >= 0) cfg.repeats = f.repeats;
    if (f.seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(f.seed);
    if (f.epochs >= 0) { cfg.train.epochs = f.epochs; cfg.lasso.epochs = f.epochs; }
    if (f.batch >= 0) { cfg.train.batch_size = f.batch; cfg.lasso.batch_size = f.batch; }
    if (f.lr >= 0) { cfg.train.learning_rate = f.lr; cfg.lasso.learning_rate = f.lr; }
    if (f.lr_decay >= 0) { cfg.train.lr_decay = f.lr_decay; cfg.lasso.lr_decay = f.lr_decay; }
    if (f.learners >= 0) cfg.train.model.n_learners = f.learners;
    if (f.hidden >= 0) cfg.train.model.hidden = f.hidden;
    if (f.beta >= 0) cfg.train.weights.beta = f.beta;
    if (f.beta_e >= 0) cfg.train.weights.beta_e = f.beta_e;
    if (f.beta_r >= 0) cfg.train.weights.beta_r = f.beta_r;
    if (f.tau >= 0) cfg.train.model.tau = f.tau;
    if (f.lambda >= 0) cfg.train.model.lambda = f.lambda;
    if (f.reg >= 0) cfg.lasso.reg = f.reg;
    if (f.n_train >= 0) cfg.n_train = f.n_train;
    if (f.n_test >= 0) cfg.n_test = f.n_test;
    if (!f.truth_file.empty()) cfg.truth_file = f.truth_file;
    return cfg;
}

void write_outputs(const std::string& out, const std::string& json_text,
                   const std::string& table) {
    namespace fs = std::filesystem;
    fs::path dir(out);
    fs::create_directories(dir);
    std::ofstream jf(dir / "report.json");
    jf << json_text << '\n';
    std::ofstream tf(dir / "report.txt");
    tf << table;
    if (!jf || !tf) throw std::runtime_error("failed writing reports under " + out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CompFS: composite feature selection experiments"};
    app.require_subcommand(1);

    RunFlags rf;
    CLI::App* run = app.add_subcommand("run", "Train and evaluate one experiment");
    run->add_option("--preset", rf.preset,
                    "Named defaults, e.g. syn1/compfs5, chem2/lasso");
    run->add_option("--config", rf.config, "key = value config file");
    run->add_option("--out", rf.out, "Directory for report.json / report.txt");
    add_override_flags(run, rf);

    RunFlags af;
    std::string sweep = "beta_r";
    std::vector<long> learner_grid{5, 10};
    std::vector<double> value_grid{0.4, 1.2, 2.0};
    CLI::App* ablate = app.add_subcommand("ablate", "Group-count sensitivity sweep");
    ablate->add_option("--sweep", sweep, "beta_r or beta")
        ->check(CLI::IsMember({"beta_r", "beta"}));
    ablate->add_option("--learner-grid", learner_grid, "Ensemble sizes to test");
    ablate->add_option("--value-grid", value_grid, "Weight values to test");
    ablate->add_option("--preset", af.preset, "Base preset (default syn2/compfs5)");
    ablate->add_option("--out", af.out, "Directory for ablation.json / ablation.txt");
    add_override_flags(ablate, af);

    std::string groups_path, truth_path;
    CLI::App* score = app.add_subcommand("score", "Score a groups file against truth");
    score->add_option("--groups", groups_path, "Discovered groups file")->required();
    score->add_option("--truth", truth_path, "Ground-truth groups file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            compfs::ExperimentConfig cfg = build_config(rf);
            compfs::ExperimentReport rep = compfs::run_experiment(cfg);
            std::string table = compfs::report_to_text(rep);
            std::cout << table;
            if (!rf.out.empty()) write_outputs(rf.out, compfs::report_to_json(rep), table);
            return rep.partial ? 2 : 0;
        }
        if (*ablate) {
            if (af.preset.empty()) af.preset = "syn2/compfs5";
            compfs::ExperimentConfig base = build_config(af);
            if (af.repeats < 0) base.repeats = 3;
            compfs::AblationReport rep =
                compfs::run_ablation(base, sweep, learner_grid, value_grid);
            std::string table = compfs::ablation_to_text(rep);
            std::cout << table;
            if (!af.out.empty()) {
                namespace fs = std::filesystem;
                fs::create_directories(af.out);
                std::ofstream jf(fs::path(af.out) / "ablation.json");
                jf << compfs::ablation_to_json(rep) << '\n';
                std::ofstream tf(fs::path(af.out) / "ablation.txt");
                tf << table;
            }
            return 0;
        }
        if (*score) {
            compfs::GroupStructure cand = compfs::load_groups_file(groups_path);
            compfs::GroupStructure truth = compfs::load_groups_file(truth_path);
            auto [tpr, fdr] = compfs::tpr_fdr(truth, cand);
            std::cout << "g_sim  " << compfs::g_sim(truth, cand) << '\n'
                      << "tpr    " << tpr << '\n'
                      << "fdr    " << fdr << '\n'
                      << "groups " << cand.size() << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
