#pragma once

#include "trienhance/dataset.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace trienhance {

/// Row-major n x k matrix of class probabilities; column j belongs to label_set()[j].
struct ProbabilityMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
};

/// A fitted probabilistic classifier. Immutable once built.
class Model {
public:
    virtual ~Model() = default;

    /// Sorted class ids seen at fit time.
    const std::vector<int>& label_set() const noexcept { return labels_; }
    std::size_t n_features() const noexcept { return n_features_; }

    ProbabilityMatrix predict_proba(const Dataset& x) const;
    virtual void predict_row(std::span<const double> x, std::span<double> out) const = 0;
    virtual std::string_view kind() const = 0;

protected:
    Model(std::vector<int> labels, std::size_t n_features);

private:
    std::vector<int> labels_;
    std::size_t n_features_;
};

using ModelPtr = std::shared_ptr<const Model>;

enum class ClassifierKind { decision_tree, random_forest, logistic_regression };

std::string_view to_string(ClassifierKind k);
ClassifierKind parse_classifier_kind(std::string_view s);

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::decision_tree;
    std::size_t max_depth = 12;
    std::size_t n_estimators = 50;
    bool bootstrap = true;
    /// Features tried per split. 0 means all for a tree and floor(sqrt(d)) for a forest.
    std::size_t max_features = 0;
    /// Pseudo-count added to every class in a leaf.
    double leaf_smoothing = 1.0;
    double learning_rate = 0.1;
    std::size_t n_iterations = 500;
    std::uint64_t seed = 42;
};

/// Trains the classifier described by `spec`. Requires a labeled, non-empty dataset
/// with at least two distinct labels.
ModelPtr fit(const ClassifierSpec& spec, const Dataset& train);

/// The training hook every enhancement block uses; tests substitute scripted models.
using Trainer = std::function<ModelPtr(const Dataset&)>;
Trainer make_trainer(const ClassifierSpec& spec);

/// Decision rule for one probability row. With label set {0,1} the result is 1 iff
/// p(1) >= threshold; otherwise argmax, ties to the smaller label id.
int decide(std::span<const double> proba, const std::vector<int>& label_set, double threshold = 0.5);

std::vector<int> predict(const Model& m, const Dataset& x, double threshold = 0.5);

/// Column of `label` in the model's label set, or -1 when absent.
int label_column(const Model& m, int label);

/// p(y = 1 | x) per row; zero when the model never saw class 1.
std::vector<double> positive_scores(const Model& m, const Dataset& x);

void check_trainable(const Dataset& train);

} // namespace trienhance
