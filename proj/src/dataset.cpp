#include "trienhance/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace trienhance {

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::original: return "original";
        case Provenance::synthetic: return "synthetic";
        case Provenance::retained: return "retained";
        case Provenance::pseudo_labeled: return "pseudo-labeled";
        case Provenance::validation_merged: return "validation-merged";
    }
    return "unknown";
}

Provenance parse_provenance(std::string_view s) {
    for (auto p : {Provenance::original, Provenance::synthetic, Provenance::retained,
                   Provenance::pseudo_labeled, Provenance::validation_merged}) {
        if (to_string(p) == s) return p;
    }
    throw Error("unknown provenance tag '" + std::string(s) + "'");
}

std::string_view to_string(ColumnKind k) {
    return k == ColumnKind::numeric ? "numeric" : "categorical";
}

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<ColumnKind> kinds, bool labeled)
    : names_(std::move(feature_names)), kinds_(std::move(kinds)), labeled_(labeled) {
    if (names_.size() != kinds_.size()) throw Error("feature names and column kinds differ in length");
}

Dataset Dataset::empty_like() const { return Dataset(names_, kinds_, labeled_); }

std::span<const double> Dataset::row(std::size_t i) const {
    return {values_.data() + i * cols(), cols()};
}

int Dataset::label(std::size_t i) const {
    if (!labeled_) throw Error("dataset is unlabeled");
    return labels_[i];
}

const std::vector<int>& Dataset::labels() const {
    if (!labeled_) throw Error("dataset is unlabeled");
    return labels_;
}

void Dataset::reserve(std::size_t n) {
    values_.reserve(n * cols());
    if (labeled_) labels_.reserve(n);
    provenance_.reserve(n);
    ids_.reserve(n);
}

void Dataset::add_row(std::span<const double> x, std::optional<int> label, Provenance p, std::int64_t id) {
    if (x.size() != cols()) {
        throw Error("row has " + std::to_string(x.size()) + " features, dataset has " + std::to_string(cols()));
    }
    if (labeled_ != label.has_value()) {
        throw Error(labeled_ ? "labeled dataset requires a label per row" : "unlabeled dataset cannot take labels");
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw Error("non-finite feature value");
    }
    values_.insert(values_.end(), x.begin(), x.end());
    if (label) labels_.push_back(*label);
    provenance_.push_back(p);
    ids_.push_back(id);
}

bool Dataset::same_schema(const Dataset& other) const {
    return names_ == other.names_ && kinds_ == other.kinds_ && labeled_ == other.labeled_;
}

void Dataset::append(const Dataset& other) {
    if (other.cols() != cols() || other.labeled_ != labeled_) throw Error("cannot append datasets with different schemas");
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
    provenance_.insert(provenance_.end(), other.provenance_.begin(), other.provenance_.end());
    ids_.insert(ids_.end(), other.ids_.begin(), other.ids_.end());
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out = empty_like();
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= rows()) throw Error("subset index out of range");
        auto r = row(i);
        out.values_.insert(out.values_.end(), r.begin(), r.end());
        if (labeled_) out.labels_.push_back(labels_[i]);
        out.provenance_.push_back(provenance_[i]);
        out.ids_.push_back(ids_[i]);
    }
    return out;
}

Dataset Dataset::with_labels(std::vector<int> labels) const {
    if (labels.size() != rows()) throw Error("label count does not match row count");
    Dataset out = *this;
    out.labeled_ = true;
    out.labels_ = std::move(labels);
    return out;
}

Dataset Dataset::without_labels() const {
    Dataset out = *this;
    out.labeled_ = false;
    out.labels_.clear();
    return out;
}

Dataset Dataset::with_provenance(Provenance p) const {
    Dataset out = *this;
    std::fill(out.provenance_.begin(), out.provenance_.end(), p);
    return out;
}

Dataset concat(const Dataset& a, const Dataset& b) {
    Dataset out = a;
    out.append(b);
    return out;
}

std::size_t ClassStats::count_of(int cls) const {
    auto it = std::find(classes.begin(), classes.end(), cls);
    return it == classes.end() ? 0 : counts[static_cast<std::size_t>(it - classes.begin())];
}

double ClassStats::prior_of(int cls) const {
    auto it = std::find(classes.begin(), classes.end(), cls);
    return it == classes.end() ? 0.0 : priors[static_cast<std::size_t>(it - classes.begin())];
}

std::size_t ClassStats::minority_count() const {
    return counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end());
}

std::size_t ClassStats::majority_count() const {
    return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

double ClassStats::imbalance_ratio() const {
    auto lo = minority_count();
    if (lo == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(majority_count()) / static_cast<double>(lo);
}

ClassStats class_stats(const Dataset& d) {
    if (!d.labeled()) throw Error("class_stats requires a labeled dataset");
    std::map<int, std::size_t> tally;
    for (int y : d.labels()) ++tally[y];
    ClassStats s;
    for (auto [cls, n] : tally) {
        s.classes.push_back(cls);
        s.counts.push_back(n);
    }
    const double total = static_cast<double>(d.rows());
    for (auto n : s.counts) s.priors.push_back(static_cast<double>(n) / total);
    return s;
}

} // namespace trienhance
