#pragma once

#include "trienhance/classifier.hpp"

#include <span>
#include <string>
#include <vector>

namespace trienhance {

/// Positive class is label 1.
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(std::span<const int> labels, std::span<const int> predictions);

struct PrecisionRecallF1 {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Zero denominators yield 0 for the affected quantity.
PrecisionRecallF1 precision_recall_f1(const ConfusionCounts& c);
double accuracy(const ConfusionCounts& c);

/// Trapezoidal area under the ROC curve traced at every distinct score. Tied
/// positive/negative pairs count one half.
double auc(std::span<const int> labels, std::span<const double> scores);

/// max over thresholds of TPR - FPR, including the empty (+inf) threshold.
double ks_statistic(std::span<const int> labels, std::span<const double> scores);

struct EvalReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double auc = 0.0;
    double ks = 0.0;
    ConfusionCounts counts;
    double threshold = 0.5;

    /// "key = value" lines.
    std::string to_key_value() const;
    /// precision,recall,f1,accuracy,auc,ks,tp,tn,fp,fn
    std::string to_csv_row() const;
    static std::string csv_header();
};

EvalReport evaluate_scores(std::span<const int> labels, std::span<const double> scores, double threshold = 0.5);
EvalReport evaluate(const Model& m, const Dataset& test, double threshold = 0.5);

/// F1 of thresholded predictions on a labeled dataset; no AUC/KS, so single-class sets are fine.
double f1_score(const Model& m, const Dataset& d, double threshold = 0.5);

struct MetricStat {
    double mean = 0.0;
    double stdev = 0.0; // sample standard deviation, 0 for a single value
};

struct ReportSummary {
    MetricStat precision, recall, f1, accuracy, auc, ks;
};

ReportSummary summarize(const std::vector<EvalReport>& reports);

} // namespace trienhance
