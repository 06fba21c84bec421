#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace turbbench {

// Shortest decimal string that parses back to the same double; "inf",
// "-inf" and "nan" for non-finite values.
std::string format_double(double v);

// Strict parsers: the whole field must be consumed. Throw InvalidArgument.
double parse_double(std::string_view text);
int parse_int(std::string_view text);
std::uint64_t parse_u64(std::string_view text);

// Splits a CSV record on commas. Fields never contain commas or quotes in
// the files this project writes.
std::vector<std::string> split_csv(std::string_view line);

}  // namespace turbbench
