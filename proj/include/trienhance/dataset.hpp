#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trienhance {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ColumnKind { numeric, categorical };

/// Where a row came from. Carried through every enhancement stage.
enum class Provenance { original, synthetic, retained, pseudo_labeled, validation_merged };

/// Sentinel class given to unlabeled rows during KFULF training.
inline constexpr int kArtificialLabel = -1;

/// Row id for rows that were never part of an input file.
inline constexpr std::int64_t kNoRowId = -1;

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view s);
std::string_view to_string(ColumnKind k);

/// Dense feature table with optional labels, a provenance tag per row and a
/// stable row id that identifies input rows across splits and stages.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> feature_names, std::vector<ColumnKind> kinds, bool labeled);

    /// Empty dataset sharing this dataset's schema and labeled flag.
    Dataset empty_like() const;

    std::size_t rows() const noexcept { return provenance_.size(); }
    std::size_t cols() const noexcept { return names_.size(); }
    bool empty() const noexcept { return rows() == 0; }
    bool labeled() const noexcept { return labeled_; }

    std::span<const double> row(std::size_t i) const;
    double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
    int label(std::size_t i) const;
    const std::vector<int>& labels() const;
    Provenance provenance(std::size_t i) const { return provenance_[i]; }
    const std::vector<Provenance>& provenances() const noexcept { return provenance_; }
    std::int64_t row_id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::int64_t>& row_ids() const noexcept { return ids_; }
    const std::vector<double>& values() const noexcept { return values_; }

    const std::vector<std::string>& feature_names() const noexcept { return names_; }
    const std::vector<ColumnKind>& column_kinds() const noexcept { return kinds_; }

    void reserve(std::size_t n);
    void add_row(std::span<const double> x, std::optional<int> label, Provenance p,
                 std::int64_t id = kNoRowId);
    /// Appends every row of `other`; schemas must agree.
    void append(const Dataset& other);

    Dataset subset(std::span<const std::size_t> indices) const;
    Dataset with_labels(std::vector<int> labels) const;
    Dataset without_labels() const;
    Dataset with_provenance(Provenance p) const;

    bool same_schema(const Dataset& other) const;
    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<std::string> names_;
    std::vector<ColumnKind> kinds_;
    bool labeled_ = true;
    std::vector<double> values_;
    std::vector<int> labels_;
    std::vector<Provenance> provenance_;
    std::vector<std::int64_t> ids_;
};

Dataset concat(const Dataset& a, const Dataset& b);

struct ClassStats {
    std::vector<int> classes;        // sorted class ids
    std::vector<std::size_t> counts; // parallel to classes
    std::vector<double> priors;      // parallel to classes, sums to 1

    std::size_t count_of(int cls) const;
    double prior_of(int cls) const;
    std::size_t minority_count() const;
    std::size_t majority_count() const;
    /// r in "1:r", i.e. majority_count / minority_count.
    double imbalance_ratio() const;
};

ClassStats class_stats(const Dataset& d);

} // namespace trienhance
