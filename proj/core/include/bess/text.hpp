#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bess {

/// Shortest decimal text that parses back to exactly `v` (locale-free).
std::string format_double(double v);

/// Fixed-point rendering with `decimals` digits after the point.
std::string format_fixed(double v, int decimals);

/// Locale-free parse of the whole of `text`; nullopt if anything is left over.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

/// Splits one CSV line on commas (no quoting) and trims surrounding blanks.
std::vector<std::string_view> split_csv_line(std::string_view line);

/// Splits text into lines, accepting LF or CRLF; a final empty line is dropped.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace bess
