#include "gradcons/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "gradcons/errors.hpp"

namespace gradcons {

namespace {

constexpr const char* kUnreached = "—";

std::string target_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0e", t);
  return buf;
}

std::string ms_label(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

bool has_trace_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) continue;
    return line == kTraceHeader;
  }
  return false;
}

}  // namespace

CompareTable compare_traces(const std::vector<std::pair<std::string, TraceFile>>& traces,
                            const std::vector<double>& targets) {
  CompareTable table;
  table.targets = targets;
  std::map<std::string, std::pair<std::string, std::string>> hash_by_rep;  // rep -> (hash, source)
  for (const auto& [source, file] : traces) {
    const std::string hash = file.meta("problem_hash");
    const std::string rep = file.meta("repetition");
    if (!hash.empty()) {
      auto [it, inserted] = hash_by_rep.emplace(rep, std::make_pair(hash, source));
      if (!inserted && it->second.first != hash) {
        throw ConfigError("problem hash mismatch: " + source + " has " + hash + " but " + it->second.second + " has " +
                          it->second.first);
      }
    }
    CompareRow row;
    row.algorithm = file.meta("algorithm");
    if (row.algorithm.empty() && !file.rows.empty()) row.algorithm = file.rows.front().algo;
    row.repetition = rep;
    row.source = source;
    for (double target : targets) {
      std::optional<TargetHit> hit;
      for (const TraceRow& r : file.rows) {
        if (r.sol_residual <= target) {
          hit = TargetHit{r.k, r.cum_comm, r.cum_grads, r.wall_ms};
          break;
        }
      }
      row.hits.push_back(hit);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CompareTable compare_directory(const std::filesystem::path& dir, const std::vector<double>& targets) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv" && has_trace_header(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no trace files in " + dir.string());
  std::vector<std::pair<std::string, TraceFile>> traces;
  for (const auto& f : files) traces.emplace_back(f.filename().string(), read_trace_csv(f));
  return compare_traces(traces, targets);
}

void write_compare_text(const CompareTable& table, std::ostream& out) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"algorithm", "rep"};
  for (double t : table.targets) {
    const std::string l = target_label(t);
    for (const char* what : {"k", "comm", "grads", "ms"}) header.push_back(std::string(what) + "@" + l);
  }
  cells.push_back(header);
  for (const CompareRow& row : table.rows) {
    std::vector<std::string> line{row.algorithm, row.repetition.empty() ? "-" : row.repetition};
    for (const auto& hit : row.hits) {
      if (hit) {
        line.push_back(std::to_string(hit->k));
        line.push_back(std::to_string(hit->cum_comm));
        line.push_back(std::to_string(hit->cum_grads));
        line.push_back(ms_label(hit->wall_ms));
      } else {
        for (int i = 0; i < 4; ++i) line.push_back(kUnreached);
      }
    }
    cells.push_back(std::move(line));
  }
  // Column widths in display characters; the dash is one column but three bytes.
  auto width = [](const std::string& s) { return s == kUnreached ? std::size_t{1} : s.size(); };
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], width(line[c]));
  }
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out << "  ";
      out << line[c] << std::string(widths[c] - width(line[c]), ' ');
    }
    out << '\n';
  }
}

void write_compare_csv(const CompareTable& table, std::ostream& out) {
  out << "algorithm,repetition,source,target,k,cum_comm,cum_grads,wall_ms\n";
  for (const CompareRow& row : table.rows) {
    for (std::size_t t = 0; t < table.targets.size(); ++t) {
      out << row.algorithm << ',' << row.repetition << ',' << row.source << ',' << target_label(table.targets[t]);
      const auto& hit = row.hits[t];
      if (hit) {
        out << ',' << hit->k << ',' << hit->cum_comm << ',' << hit->cum_grads << ',' << ms_label(hit->wall_ms) << '\n';
      } else {
        out << ',' << kUnreached << ',' << kUnreached << ',' << kUnreached << ',' << kUnreached << '\n';
      }
    }
  }
}

}  // namespace gradcons
