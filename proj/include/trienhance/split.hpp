#pragma once

#include "trienhance/dataset.hpp"

#include <cstdint>
#include <vector>

namespace trienhance {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct SplitSpec {
    enum class Mode { holdout, k_fold };
    Mode mode = Mode::holdout;
    double ratio = 0.8;  // holdout: share of rows in the first part
    std::size_t k = 3;   // k-fold: number of folds
    std::uint64_t seed = kDefaultSeed;

    static SplitSpec holdout(double ratio, std::uint64_t seed = kDefaultSeed);
    static SplitSpec k_fold(std::size_t k, std::uint64_t seed = kDefaultSeed);
};

/// Row indices of each part, ascending within a part. Holdout yields two parts
/// (first gets `ratio`), k-fold yields k disjoint parts covering every row.
std::vector<std::vector<std::size_t>> stratified_partition(const Dataset& d, const SplitSpec& spec);

/// Integer shares of `total` proportional to `weights`: floors first, then one extra
/// unit per part in descending remainder order. Equal remainders go to the part that
/// comes first in `tie_order` (defaults to index order).
std::vector<std::size_t> largest_remainder(std::size_t total, const std::vector<double>& weights,
                                           const std::vector<std::size_t>& tie_order = {});

struct HoldoutSplit {
    Dataset first;
    Dataset second;
};

HoldoutSplit stratified_holdout(const Dataset& d, double ratio, std::uint64_t seed);

/// Training/test pair for fold `fold` of a k-fold partition.
HoldoutSplit fold_split(const Dataset& d, const std::vector<std::vector<std::size_t>>& parts, std::size_t fold);

/// Labeled dataset with a fraction of rows turned into an unlabeled pool. The hidden
/// labels stay available (parallel to `pool`) for pseudo-label accuracy reporting.
struct HiddenLabelSplit {
    Dataset labeled;
    Dataset pool;
    std::vector<int> hidden_truth;
};

HiddenLabelSplit hide_labels(const Dataset& d, double fraction, std::uint64_t seed);

} // namespace trienhance
