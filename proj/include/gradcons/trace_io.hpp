#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gradcons/metrics.hpp"
#include "gradcons/trace.hpp"

namespace gradcons {

inline constexpr const char* kTraceHeader =
    "algo,k,eps_k,kc_k,cum_comm,cum_grads,obj_residual,sol_residual_best,violation,wall_ms";

// Ordered key/value pairs written as "# key=value" lines above the header.
using TraceMetadata = std::vector<std::pair<std::string, std::string>>;

struct TraceRow {
  std::string algo;
  std::size_t k = 0;
  double eps = 0.0;
  std::size_t kc = 0;
  std::size_t cum_comm = 0;
  std::size_t cum_grads = 0;
  double obj_residual = 0.0;
  double sol_residual = 0.0;
  double violation = 0.0;
  double wall_ms = 0.0;
};

struct TraceFile {
  TraceMetadata metadata;
  std::vector<TraceRow> rows;

  // Empty string when the key is absent.
  std::string meta(const std::string& key) const;
};

// 17 significant digits; strtod reads them back exactly.
std::string format_double(double v);

// One row per outer iteration k >= 1; `report` must come from `trace`.
void write_trace_csv(const RunTrace& trace, const MetricReport& report, std::ostream& out,
                     const TraceMetadata& metadata = {});
void write_trace_csv(const RunTrace& trace, const MetricReport& report, const std::filesystem::path& path,
                     const TraceMetadata& metadata = {});

// Throws ConfigError on malformed content, RuntimeFailure on I/O errors.
TraceFile read_trace_csv(std::istream& in);
TraceFile read_trace_csv(const std::filesystem::path& path);

}  // namespace gradcons
