#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

namespace compfs {

/// A deduplicated collection of nonempty feature-index groups. Construction
/// normalizes: empty members are dropped, duplicates collapse to one.
class GroupStructure {
public:
    GroupStructure() = default;

    explicit GroupStructure(const std::vector<std::vector<int>>& raw) {
        std::set<std::set<int>> uniq;
        for (const auto& g : raw) {
            if (g.empty()) continue;
            uniq.insert(std::set<int>(g.begin(), g.end()));
        }
        groups_.assign(uniq.begin(), uniq.end());
    }

    const std::vector<std::set<int>>& groups() const { return groups_; }
    std::size_t size() const { return groups_.size(); }
    bool empty() const { return groups_.empty(); }

    std::set<int> flat_union() const {
        std::set<int> u;
        for (const auto& g : groups_) u.insert(g.begin(), g.end());
        return u;
    }

    bool operator==(const GroupStructure& other) const { return groups_ == other.groups_; }

private:
    std::vector<std::set<int>> groups_;
};

/// |a ∩ b| / |a ∪ b|, with J(∅, ∅) defined as 0.
inline double jaccard(const std::set<int>& a, const std::set<int>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (int x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Group similarity: best-match Jaccard per truth group, normalized by
/// max(#truth, #candidate). Empty candidate scores 0; empty truth is an error
/// because the normalization is undefined.
inline double g_sim(const GroupStructure& truth, const GroupStructure& candidate) {
    if (truth.empty()) throw std::invalid_argument("g_sim: empty truth structure");
    if (candidate.empty()) return 0.0;
    double total = 0.0;
    for (const auto& g : truth.groups()) {
        double best = 0.0;
        for (const auto& c : candidate.groups()) best = std::max(best, jaccard(g, c));
        total += best;
    }
    const auto denom = std::max(truth.size(), candidate.size());
    return total / static_cast<double>(denom);
}

struct TprFdr {
    double tpr = 0.0;
    double fdr = 0.0;
};

/// TPR and FDR over the flattened unions of the two structures. Selecting
/// nothing yields FDR 0 by convention.
inline TprFdr tpr_fdr(const GroupStructure& truth, const GroupStructure& candidate) {
    if (truth.empty()) throw std::invalid_argument("tpr_fdr: empty truth structure");
    const std::set<int> t = truth.flat_union();
    const std::set<int> s = candidate.flat_union();
    std::size_t hit = 0;
    for (int x : s) hit += t.count(x);
    TprFdr r;
    r.tpr = static_cast<double>(hit) / static_cast<double>(t.size());
    r.fdr = s.empty() ? 0.0
                      : static_cast<double>(s.size() - hit) / static_cast<double>(s.size());
    return r;
}

/// Binary AUROC via the rank-sum (Mann-Whitney) estimator with midranks for
/// ties. Requires both classes to be present.
inline double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("auroc: scores/labels length mismatch");
    const std::size_t n = scores.size();
    std::size_t npos = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw std::invalid_argument("auroc: labels must be 0/1");
        npos += static_cast<std::size_t>(y);
    }
    const std::size_t nneg = n - npos;
    if (npos == 0 || nneg == 0)
        throw std::invalid_argument("auroc: both classes must be present");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midranks over tie blocks; accumulate the positive-class rank sum.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
        for (std::size_t k = i; k <= j; ++k)
            if (labels[idx[k]] == 1) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double u = rank_sum_pos - 0.5 * static_cast<double>(npos) * (npos + 1);
    return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

/// Fraction of matching entries.
inline double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size() || predictions.empty())
        throw std::invalid_argument("accuracy: bad input lengths");
    std::size_t hit = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        hit += (predictions[i] == labels[i]) ? 1u : 0u;
    return static_cast<double>(hit) / static_cast<double>(predictions.size());
}

}  // namespace compfs
