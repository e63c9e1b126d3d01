#include "trienhance/classifier.hpp"

#include "trienhance/models.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace trienhance {

Model::Model(std::vector<int> labels, std::size_t n_features)
    : labels_(std::move(labels)), n_features_(n_features) {
    if (labels_.empty()) throw Error("model needs a non-empty label set");
    if (!std::is_sorted(labels_.begin(), labels_.end())) throw Error("model label set must be sorted");
}

ProbabilityMatrix Model::predict_proba(const Dataset& x) const {
    if (x.cols() != n_features_) {
        throw Error("dimensionality mismatch: model expects " + std::to_string(n_features_) + " features, got " +
                    std::to_string(x.cols()));
    }
    ProbabilityMatrix p;
    p.rows = x.rows();
    p.cols = labels_.size();
    p.data.assign(p.rows * p.cols, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) predict_row(x.row(i), p.row(i));
    return p;
}

std::string_view to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::decision_tree: return "decision-tree";
        case ClassifierKind::random_forest: return "random-forest";
        case ClassifierKind::logistic_regression: return "logistic-regression";
    }
    return "unknown";
}

ClassifierKind parse_classifier_kind(std::string_view s) {
    if (s == "decision-tree" || s == "dt") return ClassifierKind::decision_tree;
    if (s == "random-forest" || s == "rf") return ClassifierKind::random_forest;
    if (s == "logistic-regression" || s == "lr") return ClassifierKind::logistic_regression;
    throw Error("unknown classifier '" + std::string(s) + "'");
}

void check_trainable(const Dataset& train) {
    if (train.empty()) throw Error("empty training set");
    if (!train.labeled()) throw Error("training set is unlabeled");
    const auto& y = train.labels();
    if (std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); })) {
        throw Error("single-class training set");
    }
}

ModelPtr fit(const ClassifierSpec& spec, const Dataset& train) {
    check_trainable(train);
    switch (spec.kind) {
        case ClassifierKind::decision_tree: {
            std::set<int> seen(train.labels().begin(), train.labels().end());
            std::vector<int> labels(seen.begin(), seen.end());
            std::vector<std::size_t> sample(train.rows());
            std::iota(sample.begin(), sample.end(), 0);
            TreeParams params;
            params.max_depth = spec.max_depth;
            params.max_features = spec.max_features;
            params.leaf_smoothing = spec.leaf_smoothing;
            std::mt19937_64 rng(spec.seed);
            return std::make_shared<DecisionTree>(DecisionTree::train(train, sample, labels, params, rng));
        }
        case ClassifierKind::random_forest:
            return std::make_shared<RandomForest>(RandomForest::train(train, spec));
        case ClassifierKind::logistic_regression:
            return std::make_shared<LogisticRegression>(
                LogisticRegression::train(train, spec.learning_rate, spec.n_iterations));
    }
    throw Error("unknown classifier kind");
}

Trainer make_trainer(const ClassifierSpec& spec) {
    return [spec](const Dataset& d) { return fit(spec, d); };
}

int decide(std::span<const double> proba, const std::vector<int>& label_set, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error("threshold must lie in [0,1]");
    if (label_set.size() == 2 && label_set[0] == 0 && label_set[1] == 1) {
        return proba[1] >= threshold ? 1 : 0;
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < proba.size(); ++j) {
        if (proba[j] > proba[best]) best = j;
    }
    return label_set[best];
}

std::vector<int> predict(const Model& m, const Dataset& x, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error("threshold must lie in [0,1]");
    auto p = m.predict_proba(x);
    std::vector<int> out(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) out[i] = decide(p.row(i), m.label_set(), threshold);
    return out;
}

int label_column(const Model& m, int label) {
    const auto& ls = m.label_set();
    auto it = std::find(ls.begin(), ls.end(), label);
    return it == ls.end() ? -1 : static_cast<int>(it - ls.begin());
}

std::vector<double> positive_scores(const Model& m, const Dataset& x) {
    auto p = m.predict_proba(x);
    int col = label_column(m, 1);
    std::vector<double> out(p.rows, 0.0);
    if (col < 0) return out;
    for (std::size_t i = 0; i < p.rows; ++i) out[i] = p.row(i)[static_cast<std::size_t>(col)];
    return out;
}

} // namespace trienhance
