#include "trienhance/models.hpp"

#include <cmath>
#include <numeric>
#include <set>

namespace trienhance {

RandomForest::RandomForest(std::vector<int> labels, std::size_t n_features, std::vector<DecisionTree> trees)
    : Model(std::move(labels), n_features), trees_(std::move(trees)) {
    if (trees_.empty()) throw Error("random forest needs at least one tree");
    for (const auto& t : trees_) {
        if (t.label_set() != label_set() || t.n_features() != n_features) throw Error("forest member schema mismatch");
    }
}

RandomForest RandomForest::train(const Dataset& data, const ClassifierSpec& spec) {
    check_trainable(data);
    if (spec.n_estimators == 0) throw Error("n_estimators must be positive");
    std::set<int> seen(data.labels().begin(), data.labels().end());
    std::vector<int> labels(seen.begin(), seen.end());

    TreeParams params;
    params.max_depth = spec.max_depth;
    params.leaf_smoothing = spec.leaf_smoothing;
    params.max_features = spec.max_features != 0
                              ? spec.max_features
                              : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(data.cols()))));

    const std::size_t n = data.rows();
    std::vector<DecisionTree> trees;
    trees.reserve(spec.n_estimators);
    for (std::size_t t = 0; t < spec.n_estimators; ++t) {
        std::mt19937_64 rng(spec.seed + t);
        std::vector<std::size_t> sample(n);
        if (spec.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (auto& s : sample) s = pick(rng);
        } else {
            std::iota(sample.begin(), sample.end(), 0);
        }
        trees.push_back(DecisionTree::train(data, sample, labels, params, rng));
    }
    return RandomForest(labels, data.cols(), std::move(trees));
}

void RandomForest::predict_row(std::span<const double> x, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> member(out.size());
    for (const auto& t : trees_) {
        t.predict_row(x, member);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += member[j];
    }
    for (auto& v : out) v /= static_cast<double>(trees_.size());
}

} // namespace trienhance
