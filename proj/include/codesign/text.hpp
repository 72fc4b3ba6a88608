#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the parsers and exporters.
namespace codesign::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool is_lower_identifier(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_lines(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

/// Strict decimal parse of the whole string; no sign prefix other than '-', no trailing junk.
std::optional<double> parse_number(std::string_view s);
std::optional<long long> parse_integer(std::string_view s);

/// Shortest representation that parses back to the same double.
std::string format_number(double v);
/// Like format_number but always keeps a decimal point ("5" -> "5.0").
std::string format_decimal(double v);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace codesign::text
