#include "trienhance/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace trienhance {

SplitSpec SplitSpec::holdout(double ratio, std::uint64_t seed) {
    SplitSpec s;
    s.mode = Mode::holdout;
    s.ratio = ratio;
    s.seed = seed;
    return s;
}

SplitSpec SplitSpec::k_fold(std::size_t k, std::uint64_t seed) {
    SplitSpec s;
    s.mode = Mode::k_fold;
    s.k = k;
    s.seed = seed;
    return s;
}

std::vector<std::size_t> largest_remainder(std::size_t total, const std::vector<double>& weights,
                                           const std::vector<std::size_t>& tie_order) {
    const std::size_t parts = weights.size();
    std::vector<std::size_t> out(parts, 0);
    if (parts == 0) return out;
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0)) throw Error("largest_remainder needs positive weights");

    std::vector<double> remainder(parts);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < parts; ++i) {
        double exact = weights[i] / sum * static_cast<double>(total);
        out[i] = static_cast<std::size_t>(std::floor(exact));
        remainder[i] = exact - std::floor(exact);
        assigned += out[i];
    }
    // Floating error can push the floors past the total; trim the smallest remainders.
    while (assigned > total) {
        auto it = std::min_element(remainder.begin(), remainder.end());
        auto i = static_cast<std::size_t>(it - remainder.begin());
        if (out[i] > 0) {
            --out[i];
            --assigned;
        }
        *it = 2.0;
    }

    std::vector<std::size_t> rank(parts);
    if (tie_order.empty()) {
        std::iota(rank.begin(), rank.end(), 0);
    } else {
        for (std::size_t pos = 0; pos < tie_order.size(); ++pos) rank[tie_order[pos]] = pos;
    }
    std::vector<std::size_t> order(parts);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        return rank[a] < rank[b];
    });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[order[i % parts]];
    return out;
}

std::vector<std::vector<std::size_t>> stratified_partition(const Dataset& d, const SplitSpec& spec) {
    if (!d.labeled()) throw Error("stratified split requires a labeled dataset");
    std::vector<double> weights;
    if (spec.mode == SplitSpec::Mode::holdout) {
        if (!(spec.ratio > 0.0 && spec.ratio < 1.0)) throw Error("holdout ratio must lie in (0,1)");
        weights = {spec.ratio, 1.0 - spec.ratio};
    } else {
        if (spec.k < 2) throw Error("k-fold split needs k >= 2");
        weights.assign(spec.k, 1.0);
    }
    const std::size_t parts = weights.size();

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < d.rows(); ++i) by_class[d.label(i)].push_back(i);

    if (spec.mode == SplitSpec::Mode::k_fold) {
        for (const auto& [cls, members] : by_class) {
            if (members.size() < spec.k) {
                throw Error("class too small: class " + std::to_string(cls) + " has " +
                            std::to_string(members.size()) + " rows, fewer than k = " + std::to_string(spec.k));
            }
        }
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<std::vector<std::size_t>> out(parts);
    // Rotating the tie order between classes spreads leftover rows over the folds.
    std::size_t offset = 0;
    for (auto& [cls, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        std::vector<std::size_t> tie_order(parts);
        for (std::size_t p = 0; p < parts; ++p) tie_order[p] = (offset + p) % parts;
        auto counts = largest_remainder(members.size(), weights, tie_order);
        std::size_t next = 0;
        for (std::size_t p = 0; p < parts; ++p) {
            for (std::size_t c = 0; c < counts[p]; ++c) out[p].push_back(members[next++]);
        }
        if (spec.mode == SplitSpec::Mode::k_fold) offset += members.size() % parts;
    }
    for (auto& part : out) std::sort(part.begin(), part.end());
    return out;
}

HoldoutSplit stratified_holdout(const Dataset& d, double ratio, std::uint64_t seed) {
    auto parts = stratified_partition(d, SplitSpec::holdout(ratio, seed));
    return {d.subset(parts[0]), d.subset(parts[1])};
}

HoldoutSplit fold_split(const Dataset& d, const std::vector<std::vector<std::size_t>>& parts, std::size_t fold) {
    if (fold >= parts.size()) throw Error("fold index out of range");
    std::vector<std::size_t> train;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        if (p != fold) train.insert(train.end(), parts[p].begin(), parts[p].end());
    }
    std::sort(train.begin(), train.end());
    return {d.subset(train), d.subset(parts[fold])};
}

HiddenLabelSplit hide_labels(const Dataset& d, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0)) throw Error("hide-labels fraction must lie in [0,1)");
    if (fraction == 0.0) return {d, d.empty_like().without_labels(), {}};
    auto split = stratified_holdout(d, 1.0 - fraction, seed);
    HiddenLabelSplit out;
    out.labeled = std::move(split.first);
    out.hidden_truth = split.second.labels();
    out.pool = split.second.without_labels();
    return out;
}

} // namespace trienhance
