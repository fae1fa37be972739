#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace satrep::io {

/// Writes via a sibling temporary file and a rename, so readers never see a
/// partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip representation; NaN is written as "nan".
std::string number(double v);

std::string join(const std::vector<std::string>& fields, char sep = ',');

/// Parses "a,b,c" into doubles. An empty string yields an empty list.
std::vector<double> parse_list(const std::string& text);

}  // namespace satrep::io
