#pragma once

#include "trienhance/classifier.hpp"

#include <span>
#include <vector>

namespace trienhance {

struct MarginRecord {
    std::size_t row = 0;
    double delta = 0.0; // highest minus second-highest class probability
};

double margin_of(std::span<const double> proba);
std::vector<MarginRecord> margins(const Model& m, const Dataset& d);

/// {0.0, 0.1, ..., 0.9}
std::vector<double> default_threshold_grid();

/// Per-class retention quota n(c) = p(c) * n_filtered_out, rounded by largest
/// remainder with ties to the smaller class id. Parallel to priors.classes.
std::vector<std::size_t> retention_quota(std::size_t n_filtered_out, const ClassStats& priors);

struct RetentionResult {
    Dataset rows;                      // provenance "retained"
    std::vector<int> classes;          // priors.classes
    std::vector<std::size_t> quota;    // n(c)
    std::vector<std::size_t> retained; // min(n(c), pool size of c)
};

/// Picks n(c) rows per class from the filtered-out pool, highest margin first (ties by
/// pool order). A class whose pool is short keeps all of its rows; the shortfall is not
/// handed to other classes. `pool_margins` is parallel to `filtered_out`.
RetentionResult retain_by_class(const Dataset& filtered_out, const ClassStats& original_priors,
                                std::span<const MarginRecord> pool_margins);

struct ThresholdResult {
    double threshold = 0.0;
    double f1 = -1.0; // -1 when skipped
    std::size_t kept = 0;
    std::size_t filtered_out = 0;
    std::size_t retained = 0;
    bool skipped = false;
};

struct FilterOptions {
    std::vector<double> thresholds = default_threshold_grid();
    bool retention = true;
};

struct FilterOutcome {
    Dataset filtered; // kept rows followed by retained rows
    double chosen_threshold = 0.0;
    std::vector<ThresholdResult> table;
    std::vector<int> classes;
    std::vector<std::size_t> retained_counts;
    std::size_t discarded = 0;
    ModelPtr model; // trained on `filtered`
    std::vector<MarginRecord> margins; // margins of `aug` under the synthesis model
};

/// Rows of `aug` with margin >= t are kept; the rest form the filtered-out pool that
/// retention draws from. Each threshold's dataset is scored by retraining and taking F1
/// on `mis`; the best F1 wins with ties to the smaller threshold. Thresholds whose
/// dataset is empty or single-class are skipped.
FilterOutcome filter_sweep(const Dataset& aug, const Dataset& mis, const Model& m, const Trainer& trainer,
                           const ClassStats& original_priors, const FilterOptions& opts = {});

/// Indices of `aug` kept directly at threshold t.
std::vector<std::size_t> kept_rows(std::span<const MarginRecord> margins, double t);

} // namespace trienhance
