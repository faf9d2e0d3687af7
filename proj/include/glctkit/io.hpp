#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "glctkit/linalg.hpp"

namespace glctkit::io {

/// Shortest round-trip decimal representation. Output is locale independent.
std::string format_double(double v);

/// Signal CSV: header `vertex,real,imag`, one row per vertex in ascending order.
SignalVector read_signal(const std::filesystem::path& path);
SignalVector parse_signal(std::istream& in);
void write_signal(const SignalVector& x, const std::filesystem::path& path);
void write_signal(const SignalVector& x, std::ostream& out);

/// Splits one CSV line on commas (no quoting support; none of our schemas need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace glctkit::io
