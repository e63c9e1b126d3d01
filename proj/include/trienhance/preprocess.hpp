#pragma once

#include "trienhance/dataset.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trienhance {

using Cell = std::optional<std::string>; // nullopt marks a missing value

/// CSV contents before preprocessing. Feature cells are kept as text.
struct RawTable {
    std::vector<std::string> header;     // feature columns, label column removed
    std::vector<std::vector<Cell>> rows; // one entry per data row, header.size() wide
    std::optional<std::string> label_name;
    std::vector<Cell> labels;            // parallel to rows when label_name is set
    std::vector<std::optional<ColumnKind>> hints;

    std::size_t size() const noexcept { return rows.size(); }
};

/// Empty cells and "NA"/"NaN" in any case are missing.
bool is_missing_marker(std::string_view cell);

RawTable parse_csv(std::istream& in, const std::optional<std::string>& label_column,
                   const std::map<std::string, ColumnKind>& schema_hints = {});
RawTable load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column,
                  const std::map<std::string, ColumnKind>& schema_hints = {});

/// Appends `unlabeled`'s rows to `base` with missing labels. Feature headers must match.
void append_unlabeled(RawTable& base, const RawTable& unlabeled);

struct PreprocessOptions {
    double missing_drop_threshold = 0.5;
    /// Raw label value mapped to class 1. Defaults to the minority value.
    std::optional<std::string> positive_label;
};

struct Preprocessed {
    Dataset labeled;   // rows that carried a label
    Dataset unlabeled; // rows whose label cell was missing (or the whole table when no label column)
    std::vector<std::string> dropped_columns;
    /// Raw label text for class 0 and class 1.
    std::array<std::string, 2> label_values;
    /// Category dictionary per kept column, in code order; empty for numeric columns.
    std::vector<std::vector<std::string>> categories;
};

/// Drops columns whose missing fraction exceeds the threshold, fills the rest with the
/// column mode and label-encodes non-numeric columns in first-appearance order.
Preprocessed preprocess(const RawTable& raw, const PreprocessOptions& opts = {});

/// Text view of a dataset; preprocess(to_raw(d)) reproduces d.
RawTable to_raw(const Dataset& d, const std::string& label_name = "label");

/// Writes header + rows; appends a "provenance" column when requested.
void write_csv(std::ostream& out, const Dataset& d, const std::string& label_name = "label",
               bool with_provenance = true);
void save_csv(const std::filesystem::path& path, const Dataset& d, const std::string& label_name = "label",
              bool with_provenance = true);

} // namespace trienhance
