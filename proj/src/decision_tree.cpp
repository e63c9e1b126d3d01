#include "trienhance/models.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace trienhance {

namespace {

// n - sum(c^2)/n, i.e. n times the Gini impurity of the counts.
double weighted_gini(const std::vector<double>& counts, double n) {
    if (n <= 0.0) return 0.0;
    double sq = 0.0;
    for (double c : counts) sq += c * c;
    return n - sq / n;
}

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, const std::vector<int>& label_set, const TreeParams& params, std::mt19937_64& rng)
        : data_(data), params_(params), rng_(rng), k_(label_set.size()) {
        class_of_.resize(data.rows());
        for (std::size_t i = 0; i < data.rows(); ++i) {
            auto it = std::lower_bound(label_set.begin(), label_set.end(), data.label(i));
            if (it == label_set.end() || *it != data.label(i)) throw Error("training label missing from label set");
            class_of_[i] = static_cast<std::size_t>(it - label_set.begin());
        }
        all_features_.resize(data.cols());
        std::iota(all_features_.begin(), all_features_.end(), 0);
    }

    std::vector<DecisionTree::Node> run(std::vector<std::size_t> sample) {
        build(sample, 0);
        return std::move(nodes_);
    }

private:
    std::vector<std::size_t> candidate_features() {
        const std::size_t d = all_features_.size();
        if (params_.max_features == 0 || params_.max_features >= d) return all_features_;
        std::vector<std::size_t> f = all_features_;
        // partial Fisher-Yates draw of max_features columns
        for (std::size_t i = 0; i < params_.max_features; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, d - 1);
            std::swap(f[i], f[pick(rng_)]);
        }
        f.resize(params_.max_features);
        std::sort(f.begin(), f.end());
        return f;
    }

    int make_leaf(const std::vector<double>& counts, double n) {
        DecisionTree::Node leaf;
        const double a = params_.leaf_smoothing;
        const double denom = n + a * static_cast<double>(k_);
        leaf.proba.resize(k_);
        for (std::size_t c = 0; c < k_; ++c) leaf.proba[c] = denom > 0.0 ? (counts[c] + a) / denom : 1.0 / static_cast<double>(k_);
        nodes_.push_back(std::move(leaf));
        return static_cast<int>(nodes_.size() - 1);
    }

    int build(std::vector<std::size_t>& idx, std::size_t depth) {
        const double n = static_cast<double>(idx.size());
        std::vector<double> counts(k_, 0.0);
        for (auto i : idx) counts[class_of_[i]] += 1.0;
        const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
        if (pure || depth >= params_.max_depth || idx.size() < params_.min_samples_split) return make_leaf(counts, n);

        double best = std::numeric_limits<double>::infinity();
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::pair<double, std::size_t>> column(idx.size());
        std::vector<double> left(k_), right(k_);
        for (std::size_t f : candidate_features()) {
            for (std::size_t r = 0; r < idx.size(); ++r) column[r] = {data_.at(idx[r], f), class_of_[idx[r]]};
            std::sort(column.begin(), column.end());
            std::fill(left.begin(), left.end(), 0.0);
            right = counts;
            for (std::size_t r = 0; r + 1 < column.size(); ++r) {
                left[column[r].second] += 1.0;
                right[column[r].second] -= 1.0;
                const double a = column[r].first;
                const double b = column[r + 1].first;
                if (!(a < b)) continue;
                const double nl = static_cast<double>(r + 1);
                const double score = weighted_gini(left, nl) + weighted_gini(right, n - nl);
                if (score < best) {
                    best = score;
                    best_feature = static_cast<int>(f);
                    double mid = a + (b - a) / 2.0;
                    best_threshold = mid < b ? mid : a;
                }
            }
        }
        if (best_feature < 0) return make_leaf(counts, n);

        std::vector<std::size_t> lo, hi;
        for (auto i : idx) {
            (data_.at(i, static_cast<std::size_t>(best_feature)) <= best_threshold ? lo : hi).push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();

        nodes_.emplace_back();
        const auto self = nodes_.size() - 1;
        nodes_[self].feature = best_feature;
        nodes_[self].threshold = best_threshold;
        const int l = build(lo, depth + 1);
        const int h = build(hi, depth + 1);
        nodes_[self].left = l;
        nodes_[self].right = h;
        return static_cast<int>(self);
    }

    const Dataset& data_;
    const TreeParams& params_;
    std::mt19937_64& rng_;
    std::size_t k_;
    std::vector<std::size_t> class_of_;
    std::vector<std::size_t> all_features_;
    std::vector<DecisionTree::Node> nodes_;
};

} // namespace

DecisionTree DecisionTree::train(const Dataset& data, std::span<const std::size_t> sample,
                                 const std::vector<int>& label_set, const TreeParams& params, std::mt19937_64& rng) {
    if (sample.empty()) throw Error("empty training set");
    TreeBuilder builder(data, label_set, params, rng);
    auto nodes = builder.run(std::vector<std::size_t>(sample.begin(), sample.end()));
    return DecisionTree(label_set, data.cols(), std::move(nodes));
}

DecisionTree::DecisionTree(std::vector<int> labels, std::size_t n_features, std::vector<Node> nodes)
    : Model(std::move(labels), n_features), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw Error("decision tree has no nodes");
    for (const auto& node : nodes_) {
        if (node.feature < 0 && node.proba.size() != label_set().size()) throw Error("leaf width does not match label set");
        if (node.feature >= 0) {
            if (static_cast<std::size_t>(node.feature) >= n_features) throw Error("split feature out of range");
            auto in_range = [&](int c) { return c >= 0 && static_cast<std::size_t>(c) < nodes_.size(); };
            if (!in_range(node.left) || !in_range(node.right)) throw Error("child index out of range");
        }
    }
}

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> x) const {
    const Node* node = &nodes_[0];
    while (node->feature >= 0) {
        node = &nodes_[static_cast<std::size_t>(x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                                                              : node->right)];
    }
    return *node;
}

void DecisionTree::predict_row(std::span<const double> x, std::span<double> out) const {
    const auto& leaf = leaf_for(x);
    std::copy(leaf.proba.begin(), leaf.proba.end(), out.begin());
}

std::size_t DecisionTree::depth() const {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const auto& node = nodes_[i];
        if (node.feature >= 0) {
            stack.emplace_back(static_cast<std::size_t>(node.left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(node.right), d + 1);
        }
    }
    return deepest;
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

} // namespace trienhance
