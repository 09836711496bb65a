#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stylecast {

/// Writes `contents` to `path` through a sibling temporary file and rename,
/// so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
/// Hexadecimal floating-point text (bit-exact).
std::string format_hex_double(double value);

/// Strict parsers: the whole token must be consumed. Throw ValidationError.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);
unsigned long long parse_uint(std::string_view text, std::string_view what);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');
std::string_view trim(std::string_view text);

}  // namespace stylecast
