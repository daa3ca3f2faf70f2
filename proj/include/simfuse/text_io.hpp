#pragma once

// Number formatting and line splitting shared by the file formats.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simfuse::text {

// Shortest decimal that parses back to the same double ("1", "0.5", ...).
std::string shortest(double value);

// Fixed 17 significant digits; round-trips bitwise through parse_double.
std::string exact17(double value);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::vector<std::string_view> split_ws(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

// Strips a trailing '\r' left by CRLF files.
std::string_view chomp(std::string_view s);

}  // namespace simfuse::text
