#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kinetic/histogram.hpp"

namespace kinetic {

// Named columns sharing one time axis.
struct Trace {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

// Shortest decimal that round-trips, at most 17 significant digits.
std::string format_double(double x);

// bin_left,bin_right,density
void emit_histogram_csv(const Histogram& h, const std::filesystem::path& path);
// t,<name1>,<name2>,...
void emit_trace_csv(const Trace& trace, const std::filesystem::path& path);
// Generic table with a header row.
void emit_table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns,
                    const std::filesystem::path& path);

Histogram read_histogram_csv(const std::filesystem::path& path);
Trace read_trace_csv(const std::filesystem::path& path);

}  // namespace kinetic
