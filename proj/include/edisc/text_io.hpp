#pragma once

// Small helpers shared by the CSV readers and writers.

#include <string>
#include <string_view>
#include <vector>

namespace edisc {

// Shortest decimal that round-trips; +inf as `inf`, -inf as `-inf`.
std::string format_double(double v);

// Inverse of format_double. Throws ValidationError on trailing junk or NaN.
double parse_double(std::string_view field);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

// Splits on '\n', dropping a trailing '\r' per line and a final empty line.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace edisc
