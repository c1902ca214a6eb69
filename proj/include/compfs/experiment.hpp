#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compfs/baselines.hpp"
#include "compfs/datasets.hpp"
#include "compfs/trainer.hpp"

namespace compfs {

/// One task x model experiment: everything needed to reproduce a results-table
/// row. Defaults mirror the published hyperparameter table via presets.
struct ExperimentConfig {
    std::string task = "syn1";    // syn1..syn4, chem1..chem3, file:<path>
    std::string model = "compfs"; // compfs | compfs1 | oracle | lasso
    long repeats = 10;
    std::uint64_t base_seed = 1;
    long n_train = 20000;
    long n_test = 200;
    TrainConfig train;   // model dims + optimizer settings for the gate models
    LassoConfig lasso;
    std::string truth_file;  // optional sidecar for file: tasks

    bool operator==(const ExperimentConfig& o) const;
};

struct RunRecord {
    std::uint64_t seed = 0;
    double tpr = 0.0;
    double fdr = 0.0;
    double g_sim = 0.0;
    long n_groups = 0;
    double accuracy = 0.0;
    double wall_seconds = 0.0;
    std::vector<std::vector<int>> groups;  // 0-based internally
    bool failed = false;
    std::string error;

    bool operator==(const RunRecord& o) const;
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;

    bool operator==(const MetricAggregate& o) const {
        return mean == o.mean && stddev == o.stddev;
    }
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RunRecord> runs;
    MetricAggregate tpr, fdr, g_sim, n_groups, accuracy;
    bool partial = false;  // some runs failed

    bool operator==(const ExperimentReport& o) const;
};

/// Named defaults reproducing the published hyperparameter rows, keyed as
/// "<task>/<model>", e.g. "syn1/compfs5", "chem2/lasso". Stored values are
/// the raw published numbers; dimension scaling happens inside the loss.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

/// Flat key = value config text. Lines may be empty or start with '#'.
/// A 'preset' key is applied first, then remaining keys override fields.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Dataset assembly for a config (train plus test split for one run seed).
std::pair<LabeledDataset, LabeledDataset> make_splits(const ExperimentConfig& cfg,
                                                      std::uint64_t run_seed);

/// Run `repeats` independent seeded cycles (seed = base + r) on a bounded
/// worker pool and aggregate. Worker count: COMPFS_WORKERS env var if set,
/// otherwise hardware concurrency, never more than `repeats`.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Appendix-style sensitivity grid on Syn2: mean/median discovered-group
/// count as the learner count and one of beta_R / beta vary. When sweeping
/// beta_R, beta is fixed at 1.0; when sweeping beta, beta_R is fixed at 1.2.
struct AblationCell {
    long learners = 0;
    double swept_value = 0.0;
    double mean_groups = 0.0;
    double median_groups = 0.0;
};

struct AblationReport {
    std::string swept;  // "beta_r" or "beta"
    std::vector<AblationCell> cells;
    long repeats = 3;
};

AblationReport run_ablation(const ExperimentConfig& base, const std::string& swept,
                            const std::vector<long>& learner_grid,
                            const std::vector<double>& value_grid);

/// JSON serialization; parse(serialize(r)) == r exactly.
std::string report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const std::string& text);
std::string ablation_to_json(const AblationReport& r);

/// Human-readable table; feature indices render 1-based.
std::string report_to_text(const ExperimentReport& r);
std::string ablation_to_text(const AblationReport& r);

/// Render a group structure like {1,2} {7} with 1-based indices.
std::string groups_to_text(const std::vector<std::vector<int>>& groups);

}  // namespace compfs
