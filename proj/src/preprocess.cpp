#include "trienhance/preprocess.hpp"

#include "trienhance/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace trienhance {

namespace {

// Splits one CSV record, honouring double-quoted fields. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
    fields.clear();
    std::string line;
    if (!std::getline(in, line)) return false;
    ++line_no;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0;; ++i) {
        if (i == line.size()) {
            if (quoted) {
                // quoted field spans a newline
                std::string next;
                if (!std::getline(in, next)) throw Error("unterminated quoted field at line " + std::to_string(line_no));
                ++line_no;
                field.push_back('\n');
                line += next;
                --i;
                continue;
            }
            break;
        }
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(was_quoted ? field : std::string(trim(field)));
    return true;
}

bool blank(const std::vector<std::string>& fields) {
    return fields.size() == 1 && fields[0].empty();
}

Cell to_cell(std::string s) {
    if (is_missing_marker(s)) return std::nullopt;
    return s;
}

struct EncodedColumn {
    std::vector<double> values;
    std::vector<std::string> categories;
};

EncodedColumn encode_numeric(const RawTable& raw, std::size_t col) {
    std::vector<std::optional<double>> parsed(raw.size());
    std::map<double, std::size_t> tally;
    for (std::size_t r = 0; r < raw.size(); ++r) {
        const Cell& c = raw.rows[r][col];
        if (!c) continue;
        auto v = parse_double(*c);
        if (!v || !std::isfinite(*v)) {
            throw Error("column '" + raw.header[col] + "' declared numeric but row " + std::to_string(r + 1) +
                        " holds '" + *c + "'");
        }
        parsed[r] = *v;
        ++tally[*v];
    }
    if (tally.empty()) throw Error("column '" + raw.header[col] + "' has no values to take a mode from");
    // ascending iteration + strict comparison keeps the smallest value on ties
    double mode = tally.begin()->first;
    std::size_t best = 0;
    for (auto [v, n] : tally) {
        if (n > best) {
            best = n;
            mode = v;
        }
    }
    EncodedColumn out;
    out.values.reserve(raw.size());
    for (auto& v : parsed) out.values.push_back(v.value_or(mode));
    return out;
}

EncodedColumn encode_categorical(const RawTable& raw, std::size_t col) {
    EncodedColumn out;
    std::unordered_map<std::string, std::size_t> code_of;
    std::vector<std::size_t> counts;
    std::vector<std::optional<std::size_t>> codes(raw.size());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        const Cell& c = raw.rows[r][col];
        if (!c) continue;
        auto [it, inserted] = code_of.emplace(*c, out.categories.size());
        if (inserted) {
            out.categories.push_back(*c);
            counts.push_back(0);
        }
        ++counts[it->second];
        codes[r] = it->second;
    }
    if (counts.empty()) throw Error("column '" + raw.header[col] + "' has no values to take a mode from");
    // codes follow first appearance, so the lowest code wins ties
    std::size_t mode = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        if (counts[k] > counts[mode]) mode = k;
    }
    out.values.reserve(raw.size());
    for (auto& c : codes) out.values.push_back(static_cast<double>(c.value_or(mode)));
    return out;
}

bool column_is_numeric(const RawTable& raw, std::size_t col) {
    for (const auto& row : raw.rows) {
        const Cell& c = row[col];
        if (!c) continue;
        auto v = parse_double(*c);
        if (!v || !std::isfinite(*v)) return false;
    }
    return true;
}

// Orders raw label values; numeric when both parse.
bool label_less(const std::string& a, const std::string& b) {
    auto x = parse_double(a);
    auto y = parse_double(b);
    if (x && y && *x != *y) return *x < *y;
    return a < b;
}

} // namespace

bool is_missing_marker(std::string_view cell) {
    auto t = to_lower(trim(cell));
    return t.empty() || t == "na" || t == "nan";
}

RawTable parse_csv(std::istream& in, const std::optional<std::string>& label_column,
                   const std::map<std::string, ColumnKind>& schema_hints) {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    if (!read_record(in, fields, line_no) || blank(fields)) throw Error("CSV input has no header row");
    std::vector<std::string> header = fields;

    std::optional<std::size_t> label_idx;
    if (label_column) {
        auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end()) throw Error("label column '" + *label_column + "' not found in header");
        label_idx = static_cast<std::size_t>(it - header.begin());
    }

    RawTable raw;
    raw.label_name = label_column;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (label_idx && j == *label_idx) continue;
        raw.header.push_back(header[j]);
        auto hint = schema_hints.find(header[j]);
        raw.hints.push_back(hint == schema_hints.end() ? std::nullopt : std::optional(hint->second));
    }

    std::size_t record = 1;
    while (read_record(in, fields, line_no)) {
        if (blank(fields)) continue;
        ++record;
        if (fields.size() != header.size()) {
            throw Error("non-rectangular CSV: record " + std::to_string(record) + " has " +
                        std::to_string(fields.size()) + " fields, header has " + std::to_string(header.size()));
        }
        std::vector<Cell> row;
        row.reserve(raw.header.size());
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (label_idx && j == *label_idx) {
                raw.labels.push_back(to_cell(std::move(fields[j])));
            } else {
                row.push_back(to_cell(std::move(fields[j])));
            }
        }
        raw.rows.push_back(std::move(row));
    }
    return raw;
}

RawTable load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column,
                  const std::map<std::string, ColumnKind>& schema_hints) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path.string() + "'");
    return parse_csv(in, label_column, schema_hints);
}

void append_unlabeled(RawTable& base, const RawTable& unlabeled) {
    if (unlabeled.header != base.header) throw Error("unlabeled CSV columns do not match the labeled input");
    for (const auto& row : unlabeled.rows) {
        base.rows.push_back(row);
        if (base.label_name) base.labels.emplace_back(std::nullopt);
    }
}

Preprocessed preprocess(const RawTable& raw, const PreprocessOptions& opts) {
    const std::size_t n = raw.size();
    const std::size_t d = raw.header.size();
    if (raw.label_name && raw.labels.size() != n) throw Error("label cells do not match row count");

    Preprocessed out;
    std::vector<std::string> names;
    std::vector<ColumnKind> kinds;
    std::vector<EncodedColumn> columns;
    for (std::size_t j = 0; j < d; ++j) {
        std::size_t missing = 0;
        for (const auto& row : raw.rows) missing += row[j] ? 0 : 1;
        double frac = n == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(n);
        if (frac > opts.missing_drop_threshold) {
            out.dropped_columns.push_back(raw.header[j]);
            continue;
        }
        auto hint = j < raw.hints.size() ? raw.hints[j] : std::nullopt;
        ColumnKind kind = hint.value_or(column_is_numeric(raw, j) ? ColumnKind::numeric : ColumnKind::categorical);
        names.push_back(raw.header[j]);
        kinds.push_back(kind);
        columns.push_back(kind == ColumnKind::numeric ? encode_numeric(raw, j) : encode_categorical(raw, j));
    }
    if (names.empty()) throw Error("degenerate dataset: all columns dropped");
    for (auto& c : columns) out.categories.push_back(std::move(c.categories));

    std::unordered_map<std::string, int> label_code;
    if (raw.label_name) {
        std::vector<std::string> seen;
        std::unordered_map<std::string, std::size_t> tally;
        for (const auto& c : raw.labels) {
            if (!c) continue;
            if (tally[*c]++ == 0) seen.push_back(*c);
        }
        if (!seen.empty()) {
            if (seen.size() != 2) {
                throw Error("binary labels required, found " + std::to_string(seen.size()) + " distinct values");
            }
            std::string positive;
            if (opts.positive_label) {
                if (!tally.count(*opts.positive_label)) {
                    throw Error("positive label '" + *opts.positive_label + "' does not occur in the label column");
                }
                positive = *opts.positive_label;
            } else {
                const auto& a = seen[0];
                const auto& b = seen[1];
                if (tally[a] != tally[b]) {
                    positive = tally[a] < tally[b] ? a : b;
                } else {
                    positive = label_less(a, b) ? b : a;
                }
            }
            const std::string& negative = positive == seen[0] ? seen[1] : seen[0];
            out.label_values = {negative, positive};
            label_code[negative] = 0;
            label_code[positive] = 1;
        }
    }

    out.labeled = Dataset(names, kinds, true);
    out.unlabeled = Dataset(names, kinds, false);
    std::vector<double> x(names.size());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < columns.size(); ++j) x[j] = columns[j].values[r];
        auto id = static_cast<std::int64_t>(r);
        if (raw.label_name && raw.labels[r]) {
            out.labeled.add_row(x, label_code.at(*raw.labels[r]), Provenance::original, id);
        } else {
            out.unlabeled.add_row(x, std::nullopt, Provenance::original, id);
        }
    }
    return out;
}

RawTable to_raw(const Dataset& d, const std::string& label_name) {
    RawTable raw;
    raw.header = d.feature_names();
    for (auto k : d.column_kinds()) raw.hints.emplace_back(k);
    if (d.labeled()) raw.label_name = label_name;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        std::vector<Cell> row;
        for (double v : d.row(i)) row.emplace_back(format_double(v));
        raw.rows.push_back(std::move(row));
        if (d.labeled()) raw.labels.emplace_back(std::to_string(d.label(i)));
    }
    return raw;
}

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace

void write_csv(std::ostream& out, const Dataset& d, const std::string& label_name, bool with_provenance) {
    bool first = true;
    auto sep = [&] {
        if (!first) out << ',';
        first = false;
    };
    for (const auto& name : d.feature_names()) {
        sep();
        out << quote_if_needed(name);
    }
    if (d.labeled()) {
        sep();
        out << quote_if_needed(label_name);
    }
    if (with_provenance) {
        sep();
        out << "provenance";
    }
    out << '\n';
    for (std::size_t i = 0; i < d.rows(); ++i) {
        first = true;
        for (double v : d.row(i)) {
            sep();
            out << format_double(v);
        }
        if (d.labeled()) {
            sep();
            out << d.label(i);
        }
        if (with_provenance) {
            sep();
            out << to_string(d.provenance(i));
        }
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& d, const std::string& label_name,
              bool with_provenance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path.string() + "'");
    write_csv(out, d, label_name, with_provenance);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

} // namespace trienhance
