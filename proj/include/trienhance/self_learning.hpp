#pragma once

#include "trienhance/classifier.hpp"

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace trienhance {

struct PseudoLabelConfig {
    std::size_t k_folds = 5;
    int artificial_label = kArtificialLabel;
    double target_percentage = 0.30;
    std::size_t max_iterations = 50;
    std::uint64_t seed = 42;
};

enum class Strategy { kfulf, dds };
std::string_view to_string(Strategy s);

struct KfulfFoldLog {
    std::size_t fold = 0;
    std::size_t artificial_rows = 0; // pool rows trained with the artificial label
    std::vector<std::size_t> tested; // pool indices predicted by this fold's model
    std::size_t kept = 0;
};

struct DdsIterationLog {
    std::size_t iteration = 0;
    std::size_t pool_size = 0;
    std::size_t selected = 0;
    double f1_base = 0.0;
    double f1_new = 0.0;
    bool accepted = false;
    std::optional<double> holdout_f1; // diagnostic only, never used to stop
};

struct SelfLearnOutcome {
    Dataset enhanced; // train rows first, then pseudo-labeled rows
    Strategy strategy = Strategy::kfulf;
    std::size_t pseudo_count = 0;
    std::vector<KfulfFoldLog> folds;
    std::vector<DdsIterationLog> iterations;
};

/// Shuffled partition of n pool rows into k folds whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> pool_folds(std::size_t n, std::size_t k, std::uint64_t seed);

/// K-fold unknown-label filtering. Each fold is predicted by a model trained on `train`
/// plus every other fold labeled with the artificial label; rows not predicted as the
/// artificial label are pseudo-labeled. An empty pool returns `train` unchanged.
SelfLearnOutcome kfulf(const Dataset& train, const Dataset& unlabeled, const Trainer& trainer,
                       const PseudoLabelConfig& cfg);

/// ceil(pct * pool), at least 1.
std::size_t dds_selection_size(std::size_t pool, double pct);

/// Delay-decision strategy: repeatedly pseudo-labels the most confident share of the
/// pool and keeps it only while training-set F1 strictly improves.
SelfLearnOutcome dds(const Dataset& train, const Dataset& unlabeled, const Trainer& trainer,
                     const PseudoLabelConfig& cfg, const Dataset* diagnostic_holdout = nullptr);

using SelfLearner = std::function<SelfLearnOutcome(const Dataset& train, const Dataset& unlabeled)>;

struct StrategyChoice {
    SelfLearnOutcome outcome;
    double kfulf_f1 = 0.0;
    double dds_f1 = 0.0;
};

/// Runs both learners, scores a model fit on each enhanced set by F1 on `holdout`
/// and keeps the better one (KFULF on ties).
StrategyChoice choose_strategy(const Dataset& train, const Dataset& unlabeled, const Dataset& holdout,
                               const Trainer& trainer, const SelfLearner& kfulf_learner,
                               const SelfLearner& dds_learner);

StrategyChoice select_strategy(const Dataset& train, const Dataset& unlabeled, const Dataset& holdout,
                               const Trainer& trainer, const PseudoLabelConfig& cfg);

} // namespace trienhance
