#include "gradcons/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gradcons/errors.hpp"

namespace gradcons {

std::string TraceFile::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const RunTrace& trace, const MetricReport& report, std::ostream& out,
                     const TraceMetadata& metadata) {
  if (report.size() != trace.records.size() + 1) {
    throw std::invalid_argument("write_trace_csv: report length does not match the trace");
  }
  for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
  out << kTraceHeader << '\n';
  for (std::size_t t = 1; t < report.size(); ++t) {
    out << trace.algorithm << ',' << report.k[t] << ',' << format_double(report.eps[t]) << ','
        << report.inner_rounds[t] << ',' << report.cum_comm[t] << ',' << report.cum_grads[t] << ','
        << format_double(report.obj_residual[t]) << ',' << format_double(report.sol_residual[t]) << ','
        << format_double(report.violation[t]) << ',' << format_double(report.wall_ms[t]) << '\n';
  }
}

void write_trace_csv(const RunTrace& trace, const MetricReport& report, const std::filesystem::path& path,
                     const TraceMetadata& metadata) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot open " + path.string() + " for writing");
  write_trace_csv(trace, report, out, metadata);
  out.flush();
  if (!out) throw RuntimeFailure("write failed for " + path.string());
}

namespace {

template <typename T>
T parse_field(const std::string& text, std::size_t line_no, const char* column) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  std::from_chars_result res;
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is not in libstdc++ 11; strtod round-trips %.17g exactly.
    char* end = nullptr;
    value = std::strtod(text.c_str(), &end);
    res.ptr = end;
    res.ec = end == first ? std::errc::invalid_argument : std::errc{};
  } else {
    res = std::from_chars(first, last, value);
  }
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError("trace line " + std::to_string(line_no) + ": bad value '" + text + "' in column " + column);
  }
  return value;
}

}  // namespace

TraceFile read_trace_csv(std::istream& in) {
  TraceFile file;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line.rfind("# ", 0) == 0) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("trace line " + std::to_string(line_no) + ": metadata needs key=value");
        file.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
        continue;
      }
      if (line != kTraceHeader) throw ConfigError("trace line " + std::to_string(line_no) + ": unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw ConfigError("trace line " + std::to_string(line_no) + ": expected 10 columns");
    TraceRow row;
    row.algo = cells[0];
    row.k = parse_field<std::size_t>(cells[1], line_no, "k");
    row.eps = parse_field<double>(cells[2], line_no, "eps_k");
    row.kc = parse_field<std::size_t>(cells[3], line_no, "kc_k");
    row.cum_comm = parse_field<std::size_t>(cells[4], line_no, "cum_comm");
    row.cum_grads = parse_field<std::size_t>(cells[5], line_no, "cum_grads");
    row.obj_residual = parse_field<double>(cells[6], line_no, "obj_residual");
    row.sol_residual = parse_field<double>(cells[7], line_no, "sol_residual_best");
    row.violation = parse_field<double>(cells[8], line_no, "violation");
    row.wall_ms = parse_field<double>(cells[9], line_no, "wall_ms");
    file.rows.push_back(std::move(row));
  }
  if (!header_seen) throw ConfigError("trace file has no header");
  return file;
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open " + path.string());
  return read_trace_csv(in);
}

}  // namespace gradcons
