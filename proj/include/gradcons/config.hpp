#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gradcons/gradconsensus.hpp"

namespace gradcons {

struct GraphSpec {
  std::size_t n = 10;
  double prob = 0.2;
  std::uint64_t seed = 1;
  std::optional<std::size_t> diameter_override;
};

struct ProblemSpec {
  enum class Kind { Logistic, Quadratic };
  Kind kind = Kind::Logistic;
  std::size_t dim = 10;
  std::uint64_t seed = 1;
  // logistic
  std::size_t samples_per_agent = 20;
  double mu1 = 0.3, sigma1 = 1.0, mu2 = -0.3, sigma2 = 1.0;
  // quadratic
  double target_scale = 1.0;
  double curvature_min = 0.5, curvature_max = 2.0;
};

enum class Algorithm { GradConsensus, Dgd, Extra, PushPull };

const char* algorithm_name(Algorithm a);

struct AlgorithmSpec {
  Algorithm name = Algorithm::GradConsensus;
  std::optional<double> alpha;  // n / L_f when unset
  Schedule schedule;            // GradConsensus only
  std::size_t max_outer = 1000;
  std::optional<double> stop_target;  // objective residual
};

struct OutputSpec {
  std::filesystem::path directory = "results";
  bool write_dataset = false;
  bool write_edges = false;
  bool wall_time = true;  // false writes wall_ms = 0 so files are byte-reproducible
};

struct ExperimentConfig {
  std::string name = "experiment";
  GraphSpec graph;
  ProblemSpec problem;
  std::vector<AlgorithmSpec> algorithms;
  OutputSpec output;
  std::size_t repetitions = 1;
  std::uint64_t seed_stride = 1000;
};

// JSON text. Unknown keys, type mismatches and out-of-range values throw
// ConfigError naming the key path, e.g. "algorithms[0].schedule.eta".
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::filesystem::path& path);

}  // namespace gradcons
