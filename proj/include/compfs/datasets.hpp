#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "compfs/metrics.hpp"
#include "compfs/rng.hpp"

namespace compfs {

struct LabeledDataset {
    std::vector<double> X;  // row-major n x p
    std::vector<int> y;
    long n = 0;
    long p = 0;
    GroupStructure truth;
    std::string name;

    double x(long row, long col) const {
        return X[static_cast<std::size_t>(row) * static_cast<std::size_t>(p) +
                 static_cast<std::size_t>(col)];
    }
};

enum class SynTask { Syn1, Syn2, Syn3, Syn4 };
enum class ChemTask { Chem1, Chem2, Chem3 };

// ---------------------------------------------------------------------------
// Binding logic expression trees (chemistry labels)
// ---------------------------------------------------------------------------

/// Boolean expression over binary feature presence bits.
class BindingLogic {
public:
    static BindingLogic feature(int index) {
        BindingLogic b;
        b.kind_ = Kind::Feat;
        b.index_ = index;
        return b;
    }
    static BindingLogic logic_not(BindingLogic a) {
        BindingLogic b;
        b.kind_ = Kind::Not;
        b.children_.push_back(std::make_shared<BindingLogic>(std::move(a)));
        return b;
    }
    static BindingLogic logic_and(BindingLogic a, BindingLogic c) {
        return binary(Kind::And, std::move(a), std::move(c));
    }
    static BindingLogic logic_or(BindingLogic a, BindingLogic c) {
        return binary(Kind::Or, std::move(a), std::move(c));
    }

    bool evaluate(const std::vector<std::uint8_t>& bits) const {
        switch (kind_) {
            case Kind::Feat:
                if (index_ < 0 || static_cast<std::size_t>(index_) >= bits.size())
                    throw std::out_of_range("binding logic: feature index out of range");
                return bits[static_cast<std::size_t>(index_)] != 0;
            case Kind::Not:
                return !children_[0]->evaluate(bits);
            case Kind::And:
                return children_[0]->evaluate(bits) && children_[1]->evaluate(bits);
            case Kind::Or:
                return children_[0]->evaluate(bits) || children_[1]->evaluate(bits);
        }
        throw std::logic_error("binding logic: bad node");
    }

    /// All feature indices referenced by the expression.
    void referenced(std::vector<int>& out) const {
        if (kind_ == Kind::Feat) {
            out.push_back(index_);
            return;
        }
        for (const auto& c : children_) c->referenced(out);
    }

private:
    enum class Kind { Feat, Not, And, Or };
    static BindingLogic binary(Kind k, BindingLogic a, BindingLogic c) {
        BindingLogic b;
        b.kind_ = k;
        b.children_.push_back(std::make_shared<BindingLogic>(std::move(a)));
        b.children_.push_back(std::make_shared<BindingLogic>(std::move(c)));
        return b;
    }
    Kind kind_ = Kind::Feat;
    int index_ = -1;
    std::vector<std::shared_ptr<BindingLogic>> children_;
};

// 0-based functional-group feature indices used by the binding logics.
inline constexpr int kChemAlkyne = 0;
inline constexpr int kChemBenzene = 17;
inline constexpr int kChemCarbonyl = 28;
inline constexpr int kChemEther = 39;
inline constexpr int kChemPrimaryAmine = 55;
inline constexpr long kChemFeatures = 84;

/// Literal order fixes how balanced combinations enumerate.
std::vector<int> chem_literals(ChemTask task);
BindingLogic chem_logic(ChemTask task);
GroupStructure chem_truth(ChemTask task);
GroupStructure syn_truth(SynTask task);

/// Gaussian synthetic tasks. Syn1-3 draw X ~ N(0, I_p); Syn4 gives
/// consecutive feature triples {3k, 3k+1, 3k+2} pairwise correlation rho
/// (trailing features that do not fill a triple stay independent).
LabeledDataset gen_syn(SynTask task, long n, long p, std::uint64_t seed,
                       double rho = 0.9);

/// Apply the task's label rule to existing rows (pure relabeling).
std::vector<int> syn_labels(SynTask task, const std::vector<double>& X, long n, long p);

/// Semi-synthetic chemistry tasks: p=84 presence bits. The logic's literal
/// bits cycle through all 2^L binary combinations (balanced); every other
/// bit is i.i.d. Bernoulli(noise_q).
LabeledDataset gen_chem(ChemTask task, long n, std::uint64_t seed,
                        double noise_q = 0.1);

/// CSV loader for externally supplied binary feature matrices: header row of
/// p feature names plus a final label column; every feature cell must be 0/1.
LabeledDataset load_binary_csv(const std::string& path);

/// Sidecar group file: one group per line, comma-separated 1-based indices.
GroupStructure load_groups_file(const std::string& path);

}  // namespace compfs
