#include "compfs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace compfs {

using nlohmann::json;

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    return task == o.task && model == o.model && repeats == o.repeats &&
           base_seed == o.base_seed && n_train == o.n_train && n_test == o.n_test &&
           truth_file == o.truth_file && train.epochs == o.train.epochs &&
           train.batch_size == o.train.batch_size &&
           train.learning_rate == o.train.learning_rate &&
           train.lr_decay == o.train.lr_decay && train.model == o.train.model &&
           train.weights.beta == o.train.weights.beta &&
           train.weights.beta_e == o.train.weights.beta_e &&
           train.weights.beta_r == o.train.weights.beta_r &&
           train.weights.warmup == o.train.weights.warmup &&
           lasso.epochs == o.lasso.epochs && lasso.batch_size == o.lasso.batch_size &&
           lasso.learning_rate == o.lasso.learning_rate &&
           lasso.lr_decay == o.lasso.lr_decay && lasso.reg == o.lasso.reg;
}

bool RunRecord::operator==(const RunRecord& o) const {
    // Equality means "same scientific result"; wall_seconds is bookkeeping
    // and never reproduces across executions.
    return seed == o.seed && tpr == o.tpr && fdr == o.fdr && g_sim == o.g_sim &&
           n_groups == o.n_groups && accuracy == o.accuracy &&
           groups == o.groups && failed == o.failed && error == o.error;
}

bool ExperimentReport::operator==(const ExperimentReport& o) const {
    return config == o.config && runs == o.runs && tpr == o.tpr && fdr == o.fdr &&
           g_sim == o.g_sim && n_groups == o.n_groups && accuracy == o.accuracy &&
           partial == o.partial;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

bool is_chem(const std::string& task) { return task.rfind("chem", 0) == 0; }

ExperimentConfig base_for_task(const std::string& task) {
    ExperimentConfig c;
    c.task = task;
    if (is_chem(task)) {
        c.n_train = 8000;
        c.n_test = 1000;
        c.train.model.p = kChemFeatures;
    } else {
        c.n_train = 20000;
        c.n_test = 200;
        c.train.model.p = 500;
    }
    return c;
}

// Per-task sparsity weights from the published hyperparameter table.
double compfs5_beta(const std::string& task) {
    if (task == "chem1") return 2.0;
    if (task == "chem2") return 3.4;
    if (task == "chem3") return 2.0;
    return 4.5;  // all synthetic tasks
}

double compfs1_beta(const std::string& task) {
    if (task == "chem1") return 0.4;
    if (task == "chem2") return 0.4;
    if (task == "chem3") return 0.7;
    return 0.35;
}

double lasso_reg(const std::string& task) {
    if (task == "chem2") return 0.2;
    if (task == "chem3") return 0.2;
    return 0.4;  // synthetic tasks and chem1
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const char* task : {"syn1", "syn2", "syn3", "syn4", "chem1", "chem2", "chem3"})
        for (const char* model : {"compfs5", "compfs1", "oracle", "lasso"})
            out.push_back(std::string(task) + "/" + model);
    return out;
}

ExperimentConfig preset(const std::string& name) {
    auto slash = name.find('/');
    if (slash == std::string::npos)
        throw std::invalid_argument("preset: expected <task>/<model>, got '" + name + "'");
    const std::string task = name.substr(0, slash);
    const std::string model = name.substr(slash + 1);
    bool known_task = false;
    for (const char* t : {"syn1", "syn2", "syn3", "syn4", "chem1", "chem2", "chem3"})
        known_task = known_task || task == t;
    if (!known_task) throw std::invalid_argument("preset: unknown task '" + task + "'");

    ExperimentConfig c = base_for_task(task);
    const bool chem = is_chem(task);
    if (model == "compfs5") {
        c.model = "compfs";
        c.train.model.n_learners = 5;
        c.train.model.hidden = 20;
        c.train.batch_size = chem ? 20 : 50;
        c.train.weights.beta = compfs5_beta(task);
        c.train.weights.beta_e = 1.0;
        c.train.weights.beta_r = 1.2;
    } else if (model == "compfs1") {
        c.model = "compfs1";
        c.train.model.n_learners = 1;
        c.train.model.hidden = 30;
        c.train.batch_size = chem ? 20 : 100;
        c.train.weights.beta = compfs1_beta(task);
        c.train.weights.beta_e = 1.0;
        c.train.weights.beta_r = 1.2;  // inert with one learner
    } else if (model == "oracle") {
        c.model = "oracle";
        c.train.model.n_learners = 1;
        c.train.model.hidden = 30;
        c.train.batch_size = chem ? 20 : 100;
        c.train.weights.beta = 0.0;
        c.train.weights.beta_e = 1.0;
        c.train.weights.beta_r = 0.0;
    } else if (model == "lasso") {
        c.model = "lasso";
        c.lasso.epochs = 8;
        c.lasso.batch_size = chem ? 20 : 50;
        c.lasso.reg = lasso_reg(task);
    } else {
        throw std::invalid_argument("preset: unknown model '" + model + "'");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Config text
// ---------------------------------------------------------------------------

namespace {

long to_long(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    long out = 0;
    try {
        out = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double out = 0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& val) {
    if (key == "task") c.task = val;
    else if (key == "model") c.model = val;
    else if (key == "repeats") c.repeats = to_long(val, key);
    else if (key == "seed") c.base_seed = static_cast<std::uint64_t>(to_long(val, key));
    else if (key == "n_train") c.n_train = to_long(val, key);
    else if (key == "n_test") c.n_test = to_long(val, key);
    else if (key == "epochs") { c.train.epochs = to_long(val, key); c.lasso.epochs = c.train.epochs; }
    else if (key == "batch") { c.train.batch_size = to_long(val, key); c.lasso.batch_size = c.train.batch_size; }
    else if (key == "lr") { c.train.learning_rate = to_double(val, key); c.lasso.learning_rate = c.train.learning_rate; }
    else if (key == "lr_decay") { c.train.lr_decay = to_double(val, key); c.lasso.lr_decay = c.train.lr_decay; }
    else if (key == "learners") c.train.model.n_learners = to_long(val, key);
    else if (key == "hidden") c.train.model.hidden = to_long(val, key);
    else if (key == "features") c.train.model.p = to_long(val, key);
    else if (key == "beta") c.train.weights.beta = to_double(val, key);
    else if (key == "beta_e") c.train.weights.beta_e = to_double(val, key);
    else if (key == "beta_r") c.train.weights.beta_r = to_double(val, key);
    else if (key == "warmup") c.train.weights.warmup = to_long(val, key);
    else if (key == "tau") c.train.model.tau = to_double(val, key);
    else if (key == "lambda") c.train.model.lambda = to_double(val, key);
    else if (key == "reg") c.lasso.reg = to_double(val, key);
    else if (key == "truth_file") c.truth_file = val;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> kvs;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        kvs.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    ExperimentConfig c;
    bool have_preset = false;
    for (const auto& [k, v] : kvs) {
        if (k == "preset") {
            if (have_preset) throw std::invalid_argument("config: duplicate preset key");
            c = preset(v);
            have_preset = true;
        }
    }
    for (const auto& [k, v] : kvs)
        if (k != "preset") apply_key(c, k, v);
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

namespace {

std::optional<SynTask> syn_task_of(const std::string& name) {
    if (name == "syn1") return SynTask::Syn1;
    if (name == "syn2") return SynTask::Syn2;
    if (name == "syn3") return SynTask::Syn3;
    if (name == "syn4") return SynTask::Syn4;
    return std::nullopt;
}

std::optional<ChemTask> chem_task_of(const std::string& name) {
    if (name == "chem1") return ChemTask::Chem1;
    if (name == "chem2") return ChemTask::Chem2;
    if (name == "chem3") return ChemTask::Chem3;
    return std::nullopt;
}

}  // namespace

std::pair<LabeledDataset, LabeledDataset> make_splits(const ExperimentConfig& cfg,
                                                      std::uint64_t run_seed) {
    // Disjoint seeds for the two splits; the test stream lives 2^32 away so
    // sweeping base seeds never collides with a train stream.
    const std::uint64_t train_seed = run_seed;
    const std::uint64_t test_seed = run_seed + (1ull << 32);
    if (auto s = syn_task_of(cfg.task)) {
        return {gen_syn(*s, cfg.n_train, cfg.train.model.p, train_seed),
                gen_syn(*s, cfg.n_test, cfg.train.model.p, test_seed)};
    }
    if (auto c = chem_task_of(cfg.task)) {
        return {gen_chem(*c, cfg.n_train, train_seed), gen_chem(*c, cfg.n_test, test_seed)};
    }
    if (cfg.task.rfind("file:", 0) == 0) {
        LabeledDataset all = load_binary_csv(cfg.task.substr(5));
        if (!cfg.truth_file.empty()) all.truth = load_groups_file(cfg.truth_file);
        // Deterministic shuffled split: last n_test rows (after permuting by
        // the run seed) become the test set.
        Rng rng(run_seed, Rng::kShuffle);
        std::vector<long> order(static_cast<std::size_t>(all.n));
        for (long i = 0; i < all.n; ++i) order[static_cast<std::size_t>(i)] = i;
        rng.shuffle(order);
        long n_test = std::min(cfg.n_test, all.n / 5);
        if (n_test < 1) throw std::runtime_error("file task: dataset too small to split");
        LabeledDataset tr, te;
        tr.p = te.p = all.p;
        tr.truth = te.truth = all.truth;
        tr.name = all.name;
        te.name = all.name + "/test";
        tr.n = all.n - n_test;
        te.n = n_test;
        tr.X.reserve(static_cast<std::size_t>(tr.n) * all.p);
        te.X.reserve(static_cast<std::size_t>(te.n) * all.p);
        for (long i = 0; i < all.n; ++i) {
            long src = order[static_cast<std::size_t>(i)];
            auto begin = all.X.begin() + static_cast<std::ptrdiff_t>(src) * all.p;
            auto& dst = (i < tr.n) ? tr : te;
            dst.X.insert(dst.X.end(), begin, begin + all.p);
            dst.y.push_back(all.y[static_cast<std::size_t>(src)]);
        }
        return {std::move(tr), std::move(te)};
    }
    throw std::invalid_argument("unknown task: '" + cfg.task + "'");
}

namespace {

RunRecord run_once(const ExperimentConfig& cfg, std::uint64_t run_seed) {
    RunRecord rec;
    rec.seed = run_seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        auto [train_data, test_data] = make_splits(cfg, run_seed);
        TrainConfig tc = cfg.train;
        tc.model.p = train_data.p;
        tc.seed = run_seed;
        const GroupStructure* truth =
            train_data.truth.empty() ? nullptr : &train_data.truth;
        EvalResult ev;
        if (cfg.model == "compfs" || cfg.model == "compfs1") {
            TrainResult tr = train(tc, train_data);
            ev = evaluate(tr.model, test_data, truth);
        } else if (cfg.model == "oracle") {
            ev = train_oracle(train_data, test_data, tc).eval;
        } else if (cfg.model == "lasso") {
            LassoConfig lc = cfg.lasso;
            lc.seed = run_seed;
            ev = train_lasso(train_data, test_data, lc).eval;
        } else {
            throw std::invalid_argument("unknown model: '" + cfg.model + "'");
        }
        rec.tpr = ev.tpr;
        rec.fdr = ev.fdr;
        rec.g_sim = ev.g_sim;
        rec.n_groups = ev.n_groups;
        rec.accuracy = ev.accuracy;
        for (const auto& g : ev.discovered.groups())
            rec.groups.emplace_back(g.begin(), g.end());
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

MetricAggregate aggregate(const std::vector<RunRecord>& runs, double RunRecord::*field) {
    std::vector<double> vals;
    for (const auto& r : runs)
        if (!r.failed && std::isfinite(r.*field)) vals.push_back(r.*field);
    MetricAggregate a;
    if (vals.empty()) return a;
    double sum = 0.0;
    for (double v : vals) sum += v;
    a.mean = sum / static_cast<double>(vals.size());
    if (vals.size() > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(vals.size() - 1));
    }
    return a;
}

long worker_count(long repeats) {
    long n = static_cast<long>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("COMPFS_WORKERS")) {
        try {
            long cap = std::stol(env);
            if (cap >= 1) n = cap;
        } catch (const std::exception&) {
            // ignore malformed env values, keep the hardware default
        }
    }
    return std::min<long>(n, repeats);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.repeats < 1) throw std::invalid_argument("run_experiment: repeats must be >= 1");
    ExperimentReport rep;
    rep.config = cfg;
    rep.runs.resize(static_cast<std::size_t>(cfg.repeats));

    const long workers = worker_count(cfg.repeats);
    std::atomic<long> next{0};
    auto worker = [&]() {
        for (;;) {
            long r = next.fetch_add(1);
            if (r >= cfg.repeats) return;
            rep.runs[static_cast<std::size_t>(r)] =
                run_once(cfg, cfg.base_seed + static_cast<std::uint64_t>(r));
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (long i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    rep.tpr = aggregate(rep.runs, &RunRecord::tpr);
    rep.fdr = aggregate(rep.runs, &RunRecord::fdr);
    rep.g_sim = aggregate(rep.runs, &RunRecord::g_sim);
    rep.accuracy = aggregate(rep.runs, &RunRecord::accuracy);
    {
        std::vector<double> counts;
        MetricAggregate a;
        for (const auto& r : rep.runs)
            if (!r.failed) counts.push_back(static_cast<double>(r.n_groups));
        if (!counts.empty()) {
            double sum = 0.0;
            for (double v : counts) sum += v;
            a.mean = sum / static_cast<double>(counts.size());
            if (counts.size() > 1) {
                double ss = 0.0;
                for (double v : counts) ss += (v - a.mean) * (v - a.mean);
                a.stddev = std::sqrt(ss / static_cast<double>(counts.size() - 1));
            }
        }
        rep.n_groups = a;
    }
    for (const auto& r : rep.runs) rep.partial = rep.partial || r.failed;
    return rep;
}

AblationReport run_ablation(const ExperimentConfig& base, const std::string& swept,
                            const std::vector<long>& learner_grid,
                            const std::vector<double>& value_grid) {
    if (swept != "beta_r" && swept != "beta")
        throw std::invalid_argument("run_ablation: swept must be beta_r or beta");
    if (learner_grid.empty() || value_grid.empty())
        throw std::invalid_argument("run_ablation: grids must be nonempty");
    AblationReport out;
    out.swept = swept;
    out.repeats = base.repeats;
    for (long n : learner_grid) {
        for (double v : value_grid) {
            ExperimentConfig cfg = base;
            cfg.train.model.n_learners = n;
            if (swept == "beta_r") {
                cfg.train.weights.beta = 1.0;
                cfg.train.weights.beta_r = v;
            } else {
                cfg.train.weights.beta_r = 1.2;
                cfg.train.weights.beta = v;
            }
            ExperimentReport rep = run_experiment(cfg);
            std::vector<double> counts;
            for (const auto& r : rep.runs)
                if (!r.failed) counts.push_back(static_cast<double>(r.n_groups));
            AblationCell cell;
            cell.learners = n;
            cell.swept_value = v;
            if (!counts.empty()) {
                double sum = 0.0;
                for (double c : counts) sum += c;
                cell.mean_groups = sum / static_cast<double>(counts.size());
                std::sort(counts.begin(), counts.end());
                std::size_t m = counts.size();
                cell.median_groups = (m % 2) ? counts[m / 2]
                                             : 0.5 * (counts[m / 2 - 1] + counts[m / 2]);
            }
            out.cells.push_back(cell);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json config_to_json(const ExperimentConfig& c) {
    return json{{"task", c.task},
                {"model", c.model},
                {"repeats", c.repeats},
                {"seed", c.base_seed},
                {"n_train", c.n_train},
                {"n_test", c.n_test},
                {"truth_file", c.truth_file},
                {"epochs", c.train.epochs},
                {"batch", c.train.batch_size},
                {"lr", c.train.learning_rate},
                {"lr_decay", c.train.lr_decay},
                {"learners", c.train.model.n_learners},
                {"hidden", c.train.model.hidden},
                {"features", c.train.model.p},
                {"tau", c.train.model.tau},
                {"lambda", c.train.model.lambda},
                {"beta", c.train.weights.beta},
                {"beta_e", c.train.weights.beta_e},
                {"beta_r", c.train.weights.beta_r},
                {"warmup", c.train.weights.warmup},
                {"lasso_epochs", c.lasso.epochs},
                {"lasso_batch", c.lasso.batch_size},
                {"lasso_lr", c.lasso.learning_rate},
                {"lasso_lr_decay", c.lasso.lr_decay},
                {"lasso_reg", c.lasso.reg}};
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.task = j.at("task").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.repeats = j.at("repeats").get<long>();
    c.base_seed = j.at("seed").get<std::uint64_t>();
    c.n_train = j.at("n_train").get<long>();
    c.n_test = j.at("n_test").get<long>();
    c.truth_file = j.at("truth_file").get<std::string>();
    c.train.epochs = j.at("epochs").get<long>();
    c.train.batch_size = j.at("batch").get<long>();
    c.train.learning_rate = j.at("lr").get<double>();
    c.train.lr_decay = j.at("lr_decay").get<double>();
    c.train.model.n_learners = j.at("learners").get<long>();
    c.train.model.hidden = j.at("hidden").get<long>();
    c.train.model.p = j.at("features").get<long>();
    c.train.model.tau = j.at("tau").get<double>();
    c.train.model.lambda = j.at("lambda").get<double>();
    c.train.weights.beta = j.at("beta").get<double>();
    c.train.weights.beta_e = j.at("beta_e").get<double>();
    c.train.weights.beta_r = j.at("beta_r").get<double>();
    c.train.weights.warmup = j.at("warmup").get<long>();
    c.lasso.epochs = j.at("lasso_epochs").get<long>();
    c.lasso.batch_size = j.at("lasso_batch").get<long>();
    c.lasso.learning_rate = j.at("lasso_lr").get<double>();
    c.lasso.lr_decay = j.at("lasso_lr_decay").get<double>();
    c.lasso.reg = j.at("lasso_reg").get<double>();
    return c;
}

json agg_to_json(const MetricAggregate& a) {
    return json{{"mean", a.mean}, {"stddev", a.stddev}};
}

MetricAggregate agg_from_json(const json& j) {
    MetricAggregate a;
    a.mean = j.at("mean").get<double>();
    a.stddev = j.at("stddev").get<double>();
    return a;
}

}  // namespace

std::string report_to_json(const ExperimentReport& r) {
    json runs = json::array();
    for (const auto& run : r.runs) {
        runs.push_back(json{{"seed", run.seed},
                            {"tpr", run.tpr},
                            {"fdr", run.fdr},
                            {"g_sim", run.g_sim},
                            {"n_groups", run.n_groups},
                            {"accuracy", run.accuracy},
                            {"wall_seconds", run.wall_seconds},
                            {"groups", run.groups},
                            {"failed", run.failed},
                            {"error", run.error}});
    }
    json j{{"config", config_to_json(r.config)},
           {"runs", runs},
           {"aggregate",
            json{{"tpr", agg_to_json(r.tpr)},
                 {"fdr", agg_to_json(r.fdr)},
                 {"g_sim", agg_to_json(r.g_sim)},
                 {"n_groups", agg_to_json(r.n_groups)},
                 {"accuracy", agg_to_json(r.accuracy)}}},
           {"partial", r.partial}};
    return j.dump(2);
}

ExperimentReport report_from_json(const std::string& text) {
    json j = json::parse(text);
    ExperimentReport r;
    r.config = config_from_json(j.at("config"));
    for (const auto& jr : j.at("runs")) {
        RunRecord run;
        run.seed = jr.at("seed").get<std::uint64_t>();
        run.tpr = jr.at("tpr").get<double>();
        run.fdr = jr.at("fdr").get<double>();
        run.g_sim = jr.at("g_sim").get<double>();
        run.n_groups = jr.at("n_groups").get<long>();
        run.accuracy = jr.at("accuracy").get<double>();
        run.wall_seconds = jr.at("wall_seconds").get<double>();
        run.groups = jr.at("groups").get<std::vector<std::vector<int>>>();
        run.failed = jr.at("failed").get<bool>();
        run.error = jr.at("error").get<std::string>();
        r.runs.push_back(std::move(run));
    }
    const json& agg = j.at("aggregate");
    r.tpr = agg_from_json(agg.at("tpr"));
    r.fdr = agg_from_json(agg.at("fdr"));
    r.g_sim = agg_from_json(agg.at("g_sim"));
    r.n_groups = agg_from_json(agg.at("n_groups"));
    r.accuracy = agg_from_json(agg.at("accuracy"));
    r.partial = j.at("partial").get<bool>();
    return r;
}

std::string ablation_to_json(const AblationReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells)
        cells.push_back(json{{"learners", c.learners},
                             {"value", c.swept_value},
                             {"mean_groups", c.mean_groups},
                             {"median_groups", c.median_groups}});
    return json{{"swept", r.swept}, {"repeats", r.repeats}, {"cells", cells}}.dump(2);
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

std::string groups_to_text(const std::vector<std::vector<int>>& groups) {
    if (groups.empty()) return "(none)";
    std::ostringstream os;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g) os << ' ';
        os << '{';
        for (std::size_t i = 0; i < groups[g].size(); ++i) {
            if (i) os << ',';
            os << groups[g][i] + 1;  // display is 1-based
        }
        os << '}';
    }
    return os.str();
}

std::string report_to_text(const ExperimentReport& r) {
    std::ostringstream os;
    os << std::fixed;
    os << "task " << r.config.task << " | model " << r.config.model << " | "
       << r.runs.size() << " repeats (base seed " << r.config.base_seed << ")\n";
    os << std::setw(6) << "seed" << std::setw(9) << "TPR%" << std::setw(9) << "FDR%"
       << std::setw(9) << "G_sim" << std::setw(8) << "groups" << std::setw(9) << "acc%"
       << std::setw(9) << "sec" << "  discovered\n";
    for (const auto& run : r.runs) {
        os << std::setw(6) << run.seed;
        if (run.failed) {
            os << "  FAILED: " << run.error << '\n';
            continue;
        }
        os << std::setprecision(1) << std::setw(9) << 100.0 * run.tpr << std::setw(9)
           << 100.0 * run.fdr << std::setprecision(3) << std::setw(9) << run.g_sim
           << std::setw(8) << run.n_groups << std::setprecision(1) << std::setw(9)
           << 100.0 * run.accuracy << std::setw(9) << run.wall_seconds << "  "
           << groups_to_text(run.groups) << '\n';
    }
    os << std::setprecision(1);
    os << "mean   " << std::setw(8) << 100.0 * r.tpr.mean << std::setw(9)
       << 100.0 * r.fdr.mean << std::setprecision(3) << std::setw(9) << r.g_sim.mean
       << std::setprecision(1) << std::setw(8) << r.n_groups.mean << std::setw(9)
       << 100.0 * r.accuracy.mean << '\n';
    os << "stddev " << std::setw(8) << 100.0 * r.tpr.stddev << std::setw(9)
       << 100.0 * r.fdr.stddev << std::setprecision(3) << std::setw(9) << r.g_sim.stddev
       << std::setprecision(1) << std::setw(8) << r.n_groups.stddev << std::setw(9)
       << 100.0 * r.accuracy.stddev << '\n';
    if (r.partial) os << "WARNING: some runs failed; aggregates cover completed runs only\n";
    return os.str();
}

std::string ablation_to_text(const AblationReport& r) {
    std::ostringstream os;
    os << "ablation sweep of " << r.swept << " (" << r.repeats << " repeats per cell)\n";
    os << std::setw(10) << "learners" << std::setw(12) << r.swept << std::setw(14)
       << "mean_groups" << std::setw(16) << "median_groups" << '\n';
    os << std::fixed << std::setprecision(2);
    for (const auto& c : r.cells)
        os << std::setw(10) << c.learners << std::setw(12) << c.swept_value
           << std::setw(14) << c.mean_groups << std::setw(16) << c.median_groups << '\n';
    return os.str();
}

}  // namespace compfs
