#include "trienhance/metrics.hpp"

#include "trienhance/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace trienhance {

namespace {

void check_binary(std::span<const int> labels) {
    for (int y : labels) {
        if (y != 0 && y != 1) throw Error("non-binary label " + std::to_string(y));
    }
}

struct RocPoint {
    double fpr;
    double tpr;
};

// ROC points from the +inf threshold down through each distinct score.
std::vector<RocPoint> roc_curve(std::span<const int> labels, std::span<const double> scores) {
    if (labels.size() != scores.size()) throw Error("labels and scores differ in length");
    check_binary(labels);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw Error("non-finite score");
        pos += labels[i] == 1 ? 1 : 0;
    }
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) throw Error("both classes must be present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<RocPoint> curve{{0.0, 0.0}};
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        curve.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                         static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return curve;
}

double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

MetricStat stat_of(const std::vector<EvalReport>& reports, double EvalReport::*field) {
    MetricStat s;
    if (reports.empty()) return s;
    for (const auto& r : reports) s.mean += r.*field;
    s.mean /= static_cast<double>(reports.size());
    if (reports.size() > 1) {
        double ss = 0.0;
        for (const auto& r : reports) ss += (r.*field - s.mean) * (r.*field - s.mean);
        s.stdev = std::sqrt(ss / static_cast<double>(reports.size() - 1));
    }
    return s;
}

} // namespace

ConfusionCounts confusion(std::span<const int> labels, std::span<const int> predictions) {
    if (labels.size() != predictions.size()) throw Error("length mismatch between labels and predictions");
    check_binary(labels);
    check_binary(predictions);
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            (predictions[i] == 1 ? c.tp : c.fn) += 1;
        } else {
            (predictions[i] == 1 ? c.fp : c.tn) += 1;
        }
    }
    return c;
}

PrecisionRecallF1 precision_recall_f1(const ConfusionCounts& c) {
    PrecisionRecallF1 r;
    r.precision = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
    r.recall = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
    r.f1 = safe_div(2.0 * r.precision * r.recall, r.precision + r.recall);
    return r;
}

double accuracy(const ConfusionCounts& c) {
    return safe_div(static_cast<double>(c.tp + c.tn), static_cast<double>(c.total()));
}

double auc(std::span<const int> labels, std::span<const double> scores) {
    auto curve = roc_curve(labels, scores);
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
    }
    return area;
}

double ks_statistic(std::span<const int> labels, std::span<const double> scores) {
    auto curve = roc_curve(labels, scores);
    double best = 0.0;
    for (const auto& p : curve) best = std::max(best, p.tpr - p.fpr);
    return best;
}

std::string EvalReport::to_key_value() const {
    std::ostringstream os;
    os << "precision = " << format_fixed(precision) << '\n'
       << "recall = " << format_fixed(recall) << '\n'
       << "f1 = " << format_fixed(f1) << '\n'
       << "accuracy = " << format_fixed(accuracy) << '\n'
       << "auc = " << format_fixed(auc) << '\n'
       << "ks = " << format_fixed(ks) << '\n'
       << "tp = " << counts.tp << '\n'
       << "tn = " << counts.tn << '\n'
       << "fp = " << counts.fp << '\n'
       << "fn = " << counts.fn << '\n'
       << "threshold = " << format_double(threshold) << '\n';
    return os.str();
}

std::string EvalReport::to_csv_row() const {
    std::ostringstream os;
    os << format_fixed(precision) << ',' << format_fixed(recall) << ',' << format_fixed(f1) << ','
       << format_fixed(accuracy) << ',' << format_fixed(auc) << ',' << format_fixed(ks) << ',' << counts.tp << ','
       << counts.tn << ',' << counts.fp << ',' << counts.fn;
    return os.str();
}

std::string EvalReport::csv_header() { return "precision,recall,f1,accuracy,auc,ks,tp,tn,fp,fn"; }

EvalReport evaluate_scores(std::span<const int> labels, std::span<const double> scores, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error("threshold must lie in [0,1]");
    if (labels.size() != scores.size()) throw Error("labels and scores differ in length");
    std::vector<int> predicted(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] >= threshold ? 1 : 0;
    EvalReport r;
    r.threshold = threshold;
    r.counts = confusion(labels, predicted);
    auto prf = precision_recall_f1(r.counts);
    r.precision = prf.precision;
    r.recall = prf.recall;
    r.f1 = prf.f1;
    r.accuracy = accuracy(r.counts);
    r.auc = auc(labels, scores);
    r.ks = ks_statistic(labels, scores);
    return r;
}

EvalReport evaluate(const Model& m, const Dataset& test, double threshold) {
    if (!test.labeled()) throw Error("evaluation set is unlabeled");
    auto scores = positive_scores(m, test);
    return evaluate_scores(test.labels(), scores, threshold);
}

double f1_score(const Model& m, const Dataset& d, double threshold) {
    if (!d.labeled()) throw Error("F1 needs a labeled dataset");
    auto predicted = predict(m, d, threshold);
    // models trained with the artificial label may still emit it; count it as negative
    for (auto& p : predicted) p = p == 1 ? 1 : 0;
    return precision_recall_f1(confusion(d.labels(), predicted)).f1;
}

ReportSummary summarize(const std::vector<EvalReport>& reports) {
    ReportSummary s;
    s.precision = stat_of(reports, &EvalReport::precision);
    s.recall = stat_of(reports, &EvalReport::recall);
    s.f1 = stat_of(reports, &EvalReport::f1);
    s.accuracy = stat_of(reports, &EvalReport::accuracy);
    s.auc = stat_of(reports, &EvalReport::auc);
    s.ks = stat_of(reports, &EvalReport::ks);
    return s;
}

} // namespace trienhance
