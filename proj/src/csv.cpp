#include "kinetic/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace kinetic {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + " has no header row");
  return rows;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad number '" + s + "' in " + path.string());
  return x;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

void emit_histogram_csv(const Histogram& h, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "bin_left,bin_right,density\n";
  for (std::size_t b = 0; b < h.bins(); ++b)
    out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << format_double(h.density[b])
        << '\n';
  finish(out, path);
}

void emit_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  if (trace.names.size() != trace.columns.size()) throw std::invalid_argument("trace names and columns disagree");
  for (const auto& c : trace.columns)
    if (c.size() != trace.times.size()) throw std::invalid_argument("trace column length differs from times");
  auto out = open_out(path);
  out << 't';
  for (const auto& n : trace.names) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < trace.times.size(); ++r) {
    out << format_double(trace.times[r]);
    for (const auto& c : trace.columns) out << ',' << format_double(c[r]);
    out << '\n';
  }
  finish(out, path);
}

void emit_table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns,
                    const std::filesystem::path& path) {
  if (header.size() != columns.size() || columns.empty()) throw std::invalid_argument("table header/column mismatch");
  auto out = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (std::size_t r = 0; r < columns[0].size(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c].at(r));
    out << '\n';
  }
  finish(out, path);
}

Histogram read_histogram_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows[0] != std::vector<std::string>{"bin_left", "bin_right", "density"})
    throw std::runtime_error(path.string() + " is not a histogram file");
  Histogram h;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3) throw std::runtime_error("malformed row in " + path.string());
    if (r == 1) h.edges.push_back(parse_double(rows[r][0], path));
    h.edges.push_back(parse_double(rows[r][1], path));
    h.density.push_back(parse_double(rows[r][2], path));
  }
  return h;
}

Trace read_trace_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows[0].empty() || rows[0][0] != "t") throw std::runtime_error(path.string() + " is not a trace file");
  Trace tr;
  tr.names.assign(rows[0].begin() + 1, rows[0].end());
  tr.columns.resize(tr.names.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw std::runtime_error("malformed row in " + path.string());
    tr.times.push_back(parse_double(rows[r][0], path));
    for (std::size_t c = 0; c < tr.names.size(); ++c) tr.columns[c].push_back(parse_double(rows[r][c + 1], path));
  }
  return tr;
}

}  // namespace kinetic
