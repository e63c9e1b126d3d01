#pragma once

#include "trienhance/classifier.hpp"
#include "trienhance/filtering.hpp"
#include "trienhance/preprocess.hpp"
#include "trienhance/self_learning.hpp"
#include "trienhance/synthesis.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace trienhance {

enum class StrategyMode { auto_select, kfulf, dds };
std::string_view to_string(StrategyMode m);
StrategyMode parse_strategy_mode(std::string_view s);

/// Everything a run depends on. A single seed drives splits, synthesis, the
/// classifier and the KFULF fold shuffle.
struct PipelineConfig {
    std::uint64_t seed = kDefaultSeed;

    ClassifierKind classifier = ClassifierKind::decision_tree;
    std::size_t max_depth = 12;
    std::size_t n_estimators = 50;
    bool bootstrap = true;
    std::size_t max_features = 0;
    double leaf_smoothing = 1.0;
    double learning_rate = 0.1;
    std::size_t n_iterations = 500;
    double decision_threshold = 0.5;

    /// "smote", "random-oversample" or "replay:<csv path>", raced in this order.
    std::vector<std::string> techniques = {"smote", "random-oversample"};
    std::size_t smote_k = 5;
    double target_ratio = 1.0;
    double synthesis_train_ratio = 0.8;

    std::vector<double> thresholds = default_threshold_grid();
    bool retention = true;

    std::size_t k_folds = 5;
    double target_percentage = 0.30;
    std::size_t max_iterations = 50;
    StrategyMode strategy = StrategyMode::auto_select;
    double selection_holdout = 0.2;

    bool disable_synthesis = false;
    bool disable_filtering = false;
    bool disable_selflearning = false;

    std::size_t benchmark_folds = 3;
    std::string label_column = "label";
    double hide_labels = 0.0;
    double missing_drop_threshold = 0.5;
    std::optional<std::string> positive_label;

    ClassifierSpec classifier_spec() const;
    PseudoLabelConfig pseudo_label_config() const;
    PreprocessOptions preprocess_options() const;

    /// Throws Error naming the first invalid field.
    void validate() const;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Synthesis techniques named by the config; replay files are matched against `schema`.
std::vector<TechniquePtr> make_techniques(const PipelineConfig& cfg, const Dataset& schema);

/// Applies one `key = value` assignment. Unknown keys and malformed values throw.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` lines; blank lines and lines starting with '#' are ignored.
PipelineConfig parse_config(std::istream& in, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

/// Every key in a fixed order; parse_config(write_config(c)) == c.
std::string write_config(const PipelineConfig& cfg);

} // namespace trienhance
