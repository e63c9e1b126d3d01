#pragma once

#include "trienhance/classifier.hpp"

#include <random>

namespace trienhance {

struct TreeParams {
    std::size_t max_depth = 12;
    std::size_t min_samples_split = 2;
    std::size_t max_features = 0; // 0 = all features
    double leaf_smoothing = 1.0;
};

/// CART classification tree: Gini impurity, exhaustive search over midpoints of sorted
/// unique values, rows with x[feature] <= threshold go left.
class DecisionTree final : public Model {
public:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::vector<double> proba; // leaves only
    };

    /// `sample` lists training rows and may repeat rows (bootstrap).
    static DecisionTree train(const Dataset& data, std::span<const std::size_t> sample,
                              const std::vector<int>& label_set, const TreeParams& params, std::mt19937_64& rng);

    DecisionTree(std::vector<int> labels, std::size_t n_features, std::vector<Node> nodes);

    void predict_row(std::span<const double> x, std::span<double> out) const override;
    std::string_view kind() const override { return "decision-tree"; }

    /// Edges on the longest root-to-leaf path.
    std::size_t depth() const;
    std::size_t leaf_count() const;
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

private:
    const Node& leaf_for(std::span<const double> x) const;
    std::vector<Node> nodes_;
};

class RandomForest final : public Model {
public:
    RandomForest(std::vector<int> labels, std::size_t n_features, std::vector<DecisionTree> trees);

    /// Member t draws its bootstrap sample and feature subsets from seed + t.
    static RandomForest train(const Dataset& data, const ClassifierSpec& spec);

    void predict_row(std::span<const double> x, std::span<double> out) const override;
    std::string_view kind() const override { return "random-forest"; }

    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

private:
    std::vector<DecisionTree> trees_;
};

/// Full-batch gradient descent on standardized features. Two labels use a single
/// sigmoid; three or more use one-vs-rest with normalized scores.
class LogisticRegression final : public Model {
public:
    LogisticRegression(std::vector<int> labels, std::vector<double> means, std::vector<double> scales,
                       std::vector<std::vector<double>> weights, std::vector<double> biases);

    static LogisticRegression train(const Dataset& data, double learning_rate, std::size_t iterations);

    void predict_row(std::span<const double> x, std::span<double> out) const override;
    std::string_view kind() const override { return "logistic-regression"; }

    /// Mean cross-entropy before each update followed by the final loss;
    /// one sequence per binary sub-problem.
    const std::vector<std::vector<double>>& loss_history() const noexcept { return loss_history_; }

    const std::vector<double>& means() const noexcept { return means_; }
    const std::vector<double>& scales() const noexcept { return scales_; }
    const std::vector<std::vector<double>>& weights() const noexcept { return weights_; }
    const std::vector<double>& biases() const noexcept { return biases_; }

private:
    std::vector<double> means_;
    std::vector<double> scales_;
    std::vector<std::vector<double>> weights_; // one row per binary sub-problem
    std::vector<double> biases_;
    std::vector<std::vector<double>> loss_history_;
};

/// Text serialization for fitted models (format described in docs/model-format.md).
void save_model(std::ostream& out, const Model& m);
ModelPtr load_model(std::istream& in);

} // namespace trienhance
