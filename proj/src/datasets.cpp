#include "compfs/datasets.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace compfs {

namespace {

const char* syn_name(SynTask t) {
    switch (t) {
        case SynTask::Syn1: return "syn1";
        case SynTask::Syn2: return "syn2";
        case SynTask::Syn3: return "syn3";
        case SynTask::Syn4: return "syn4";
    }
    return "?";
}

const char* chem_name(ChemTask t) {
    switch (t) {
        case ChemTask::Chem1: return "chem1";
        case ChemTask::Chem2: return "chem2";
        case ChemTask::Chem3: return "chem3";
    }
    return "?";
}

}  // namespace

GroupStructure syn_truth(SynTask task) {
    switch (task) {
        case SynTask::Syn1: return GroupStructure({{0}, {1}});
        case SynTask::Syn2: return GroupStructure({{0, 1}, {2, 3}});
        case SynTask::Syn3: return GroupStructure({{0, 1}, {0, 2}});
        case SynTask::Syn4: return GroupStructure({{0, 3}, {6, 9}});
    }
    throw std::invalid_argument("syn_truth: bad task");
}

std::vector<int> syn_labels(SynTask task, const std::vector<double>& X, long n, long p) {
    if (static_cast<long>(X.size()) != n * p)
        throw std::invalid_argument("syn_labels: X size mismatch");
    std::vector<int> y(static_cast<std::size_t>(n));
    for (long r = 0; r < n; ++r) {
        const double* row = X.data() + static_cast<std::size_t>(r) * p;
        bool pos = false;
        switch (task) {
            case SynTask::Syn1: pos = row[0] > 0.55 || row[1] > 0.55; break;
            case SynTask::Syn2: pos = row[0] * row[1] > 0.30 || row[2] * row[3] > 0.30; break;
            case SynTask::Syn3: pos = row[0] * row[1] > 0.30 || row[0] * row[2] > 0.30; break;
            case SynTask::Syn4: pos = row[0] * row[3] > 0.30 || row[6] * row[9] > 0.30; break;
        }
        y[static_cast<std::size_t>(r)] = pos ? 1 : 0;
    }
    return y;
}

LabeledDataset gen_syn(SynTask task, long n, long p, std::uint64_t seed, double rho) {
    if (n < 1 || p < 10) throw std::invalid_argument("gen_syn: need n >= 1, p >= 10");
    LabeledDataset d;
    d.n = n;
    d.p = p;
    d.name = syn_name(task);
    d.truth = syn_truth(task);
    d.X.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(p));
    Rng rng(seed, Rng::kData);

    if (task != SynTask::Syn4) {
        for (auto& v : d.X) v = rng.normal();
    } else {
        // Equicorrelated 3x3 blocks via the closed-form Cholesky factor of
        // (1-rho) I + rho 11^T; trailing features (p mod 3) stay independent.
        const double l21 = rho;
        const double l22 = std::sqrt(1.0 - rho * rho);
        const double l31 = rho;
        const double l32 = rho * (1.0 - rho) / l22;
        const double l33 = std::sqrt(1.0 - l31 * l31 - l32 * l32);
        const long triples = p / 3;
        for (long r = 0; r < n; ++r) {
            double* row = d.X.data() + static_cast<std::size_t>(r) * p;
            for (long t = 0; t < triples; ++t) {
                const double z1 = rng.normal();
                const double z2 = rng.normal();
                const double z3 = rng.normal();
                row[3 * t] = z1;
                row[3 * t + 1] = l21 * z1 + l22 * z2;
                row[3 * t + 2] = l31 * z1 + l32 * z2 + l33 * z3;
            }
            for (long k = 3 * triples; k < p; ++k) row[k] = rng.normal();
        }
    }
    d.y = syn_labels(task, d.X, n, p);
    return d;
}

std::vector<int> chem_literals(ChemTask task) {
    switch (task) {
        case ChemTask::Chem1: return {kChemEther, kChemAlkyne};
        case ChemTask::Chem2: return {kChemPrimaryAmine, kChemBenzene, kChemEther};
        case ChemTask::Chem3:
            return {kChemBenzene, kChemCarbonyl, kChemAlkyne, kChemEther};
    }
    throw std::invalid_argument("chem_literals: bad task");
}

BindingLogic chem_logic(ChemTask task) {
    using B = BindingLogic;
    switch (task) {
        case ChemTask::Chem1:
            // Ether OR NO Alkyne
            return B::logic_or(B::feature(kChemEther),
                               B::logic_not(B::feature(kChemAlkyne)));
        case ChemTask::Chem2:
            // (Primary Amine OR NO Benzene) AND NO Ether
            return B::logic_and(
                B::logic_or(B::feature(kChemPrimaryAmine),
                            B::logic_not(B::feature(kChemBenzene))),
                B::logic_not(B::feature(kChemEther)));
        case ChemTask::Chem3:
            // (Benzene AND NO Carbonyl) OR (Alkyne AND NO Ether)
            return B::logic_or(
                B::logic_and(B::feature(kChemBenzene),
                             B::logic_not(B::feature(kChemCarbonyl))),
                B::logic_and(B::feature(kChemAlkyne),
                             B::logic_not(B::feature(kChemEther))));
    }
    throw std::invalid_argument("chem_logic: bad task");
}

GroupStructure chem_truth(ChemTask task) {
    switch (task) {
        case ChemTask::Chem1:
            return GroupStructure({{kChemEther}, {kChemAlkyne}});
        case ChemTask::Chem2:
            return GroupStructure({{kChemPrimaryAmine, kChemBenzene}, {kChemEther}});
        case ChemTask::Chem3:
            return GroupStructure(
                {{kChemBenzene, kChemCarbonyl}, {kChemAlkyne, kChemEther}});
    }
    throw std::invalid_argument("chem_truth: bad task");
}

LabeledDataset gen_chem(ChemTask task, long n, std::uint64_t seed, double noise_q) {
    if (n < 16) throw std::invalid_argument("gen_chem: need n >= 16");
    LabeledDataset d;
    d.n = n;
    d.p = kChemFeatures;
    d.name = chem_name(task);
    d.truth = chem_truth(task);
    d.X.assign(static_cast<std::size_t>(n) * kChemFeatures, 0.0);
    Rng rng(seed, Rng::kData);

    const auto literals = chem_literals(task);
    const auto logic = chem_logic(task);
    const std::size_t n_lit = literals.size();
    const long combos = 1L << n_lit;

    std::vector<std::uint8_t> lit_mask(kChemFeatures, 0);
    for (int f : literals) lit_mask[static_cast<std::size_t>(f)] = 1;

    d.y.resize(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> bits(kChemFeatures, 0);
    for (long r = 0; r < n; ++r) {
        // Literal bits cycle through every binary combination (balanced).
        const long combo = r % combos;
        std::fill(bits.begin(), bits.end(), 0);
        for (std::size_t j = 0; j < n_lit; ++j)
            bits[static_cast<std::size_t>(literals[j])] =
                static_cast<std::uint8_t>((combo >> j) & 1);
        // Everything that is not a literal is sparse Bernoulli noise.
        for (long k = 0; k < kChemFeatures; ++k) {
            if (!lit_mask[static_cast<std::size_t>(k)])
                bits[static_cast<std::size_t>(k)] =
                    static_cast<std::uint8_t>(rng.uniform() < noise_q ? 1 : 0);
        }
        double* row = d.X.data() + static_cast<std::size_t>(r) * kChemFeatures;
        for (long k = 0; k < kChemFeatures; ++k)
            row[k] = static_cast<double>(bits[static_cast<std::size_t>(k)]);
        d.y[static_cast<std::size_t>(r)] = logic.evaluate(bits) ? 1 : 0;
    }
    return d;
}

LabeledDataset load_binary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_binary_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("load_binary_csv: empty file " + path);

    const auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ss(s);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };

    const auto header = split(line);
    if (header.size() < 2)
        throw std::runtime_error("load_binary_csv: header needs features + label column");
    const long p = static_cast<long>(header.size()) - 1;

    LabeledDataset d;
    d.p = p;
    d.name = path;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (static_cast<long>(cells.size()) != p + 1)
            throw std::runtime_error("load_binary_csv: line " + std::to_string(lineno) +
                                     ": expected " + std::to_string(p + 1) + " cells, got " +
                                     std::to_string(cells.size()));
        for (long c = 0; c < p; ++c) {
            const auto& cell = cells[static_cast<std::size_t>(c)];
            if (cell != "0" && cell != "1")
                throw std::runtime_error("load_binary_csv: line " + std::to_string(lineno) +
                                         ", column " + std::to_string(c + 1) +
                                         ": feature value must be 0 or 1, got '" + cell + "'");
            d.X.push_back(cell == "1" ? 1.0 : 0.0);
        }
        const auto& lab = cells[static_cast<std::size_t>(p)];
        std::size_t pos = 0;
        int yv = 0;
        try {
            yv = std::stoi(lab, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != lab.size())
            throw std::runtime_error("load_binary_csv: line " + std::to_string(lineno) +
                                     ": bad label '" + lab + "'");
        d.y.push_back(yv);
        ++d.n;
    }
    if (d.n == 0) throw std::runtime_error("load_binary_csv: no data rows in " + path);
    return d;
}

GroupStructure load_groups_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_groups_file: cannot open " + path);
    std::vector<std::vector<int>> raw;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<int> group;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t pos = 0;
            int idx = 0;
            try {
                idx = std::stoi(cell, &pos);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos == std::string::npos || idx < 1)
                throw std::runtime_error("load_groups_file: line " + std::to_string(lineno) +
                                         ": bad 1-based index '" + cell + "'");
            group.push_back(idx - 1);  // stored 0-based internally
        }
        if (!group.empty()) raw.push_back(group);
    }
    return GroupStructure(raw);
}

}  // namespace compfs
