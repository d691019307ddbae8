#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gradcons/trace_io.hpp"

namespace gradcons {

inline const std::vector<double> kDefaultTargets{1e-2, 1e-5, 1e-8};

struct TargetHit {
  std::size_t k = 0;
  std::size_t cum_comm = 0;
  std::size_t cum_grads = 0;
  double wall_ms = 0.0;
};

struct CompareRow {
  std::string algorithm;
  std::string repetition;
  std::string source;
  std::vector<std::optional<TargetHit>> hits;  // one per target
};

struct CompareTable {
  std::vector<double> targets;
  std::vector<CompareRow> rows;
};

// First row whose best-agent solution residual is <= each target. Files in
// the same repetition must carry the same problem_hash (ConfigError otherwise).
CompareTable compare_traces(const std::vector<std::pair<std::string, TraceFile>>& traces,
                            const std::vector<double>& targets = kDefaultTargets);

// Every *.csv with the trace header under `dir`, sorted by file name.
CompareTable compare_directory(const std::filesystem::path& dir, const std::vector<double>& targets = kDefaultTargets);

void write_compare_text(const CompareTable& table, std::ostream& out);
void write_compare_csv(const CompareTable& table, std::ostream& out);

}  // namespace gradcons
