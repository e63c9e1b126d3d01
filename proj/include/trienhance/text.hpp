#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trienhance {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
/// Fixed-point with `digits` decimals; used for human-facing report tables.
std::string format_fixed(double v, int digits = 6);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Whole-string parse; surrounding whitespace is ignored.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

} // namespace trienhance
