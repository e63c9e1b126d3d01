#pragma once

#include "trienhance/config.hpp"
#include "trienhance/metrics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace trienhance {

struct StageTiming {
    std::string stage;
    double milliseconds = 0.0;
};

/// Pseudo-label quality against labels that were hidden before the run.
struct PseudoLabelAudit {
    std::size_t pool_rows = 0;
    std::size_t pseudo_rows = 0;
    std::size_t pseudo_correct = 0;
    double pseudo_accuracy = 0.0; // over pseudo-labeled rows, 0 when there are none
    double base_accuracy = 0.0;   // a model fit on the labeled input, over the whole pool
};

struct EnhancementResult {
    Dataset input;
    Dataset augmented;    // D_aug, the input itself when synthesis is off
    Dataset filtered;     // D_filtered
    Dataset enhanced;     // D_enhanced, the final dataset
    std::size_t unlabeled_rows = 0;
    std::size_t selection_holdout_rows = 0;

    std::optional<SynthesisOutcome> synthesis;
    std::optional<FilterOutcome> filtering;
    std::optional<SelfLearnOutcome> self_learning;
    std::optional<double> kfulf_holdout_f1;
    std::optional<double> dds_holdout_f1;
    /// Why a stage that was switched on still passed its input through.
    std::vector<std::string> notes;
    std::vector<StageTiming> timing;
};

/// Synthesis, then filtering, then self-learning. A disabled stage hands its input on
/// unchanged. Stage errors are rethrown with the stage name in front.
EnhancementResult run_pipeline(const Dataset& input, const std::optional<Dataset>& unlabeled,
                               const PipelineConfig& cfg);
EnhancementResult run_pipeline(const Dataset& input, const std::optional<Dataset>& unlabeled,
                               const PipelineConfig& cfg, const Trainer& trainer);

/// Matches pseudo-labeled rows of `enhanced` to `pool` by row id.
PseudoLabelAudit audit_pseudo_labels(const Dataset& enhanced, const Dataset& pool,
                                     const std::vector<int>& hidden_truth, const Model& base_model);

struct FoldResult {
    std::size_t fold = 0;
    std::size_t train_rows = 0;    // labeled rows handed to both arms
    std::size_t pool_rows = 0;     // rows whose labels were hidden
    std::size_t enhanced_rows = 0;
    std::size_t test_rows = 0;
    EvalReport baseline;
    EvalReport enhanced;
    bool leakage_free = true;
    std::optional<PseudoLabelAudit> audit;
};

struct BenchmarkResult {
    std::vector<FoldResult> folds;
    ReportSummary baseline;
    ReportSummary enhanced;
};

/// Stratified k-fold comparison. Per fold (seed + fold index) the training part loses
/// `hide_labels` of its labels to an unlabeled pool; the baseline is fit on the
/// remaining labeled rows and the enhanced arm on the pipeline output from the same
/// rows. Both are scored on the untouched test fold.
BenchmarkResult benchmark(const Dataset& input, const PipelineConfig& cfg);

struct AblationRow {
    std::string name;
    PipelineConfig config;
    BenchmarkResult result;
};

/// The full pipeline plus "w/o sl", "w/o fil", "w/o sl+fil", "w/o fil w. KFULF" and
/// "w/o fil w. DDS", in that order.
std::vector<std::pair<std::string, PipelineConfig>> ablation_configs(const PipelineConfig& base);
std::vector<AblationRow> run_ablation(const Dataset& input, const PipelineConfig& base);

} // namespace trienhance
