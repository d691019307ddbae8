#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gradcons/config.hpp"
#include "gradcons/graph.hpp"
#include "gradcons/metrics.hpp"
#include "gradcons/problems.hpp"
#include "gradcons/trace.hpp"

namespace gradcons {

// Everything an algorithm run needs for one repetition.
struct ProblemInstance {
  std::size_t repetition = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t problem_seed = 0;
  Digraph graph;
  ColumnStochasticMatrix push_sum;
  AuxMatrices aux;
  std::unique_ptr<Objective> objective;
  std::optional<LogisticDataset> dataset;
  Reference reference;
  std::uint64_t hash = 0;  // problem data + graph
};

ProblemInstance build_instance(const ExperimentConfig& cfg, std::size_t repetition);

// alpha from the spec, or n / L_f so that alpha / n = 1 / L_f.
double resolve_alpha(const AlgorithmSpec& spec, const Objective& objective);

RunTrace run_algorithm(const AlgorithmSpec& spec, const ProblemInstance& instance, bool time_iterations);

struct RunOutput {
  Algorithm algorithm = Algorithm::GradConsensus;
  std::size_t repetition = 0;
  double alpha = 0.0;
  RunTrace trace;
  MetricReport report;
  std::filesystem::path csv;  // empty when files were not written
};

struct ExperimentResult {
  std::vector<RunOutput> runs;
  std::vector<std::uint64_t> problem_hashes;  // per repetition
  std::filesystem::path directory;
};

// Algorithm name, suffixed with its list index when the name repeats.
std::string run_label(const ExperimentConfig& cfg, std::size_t index);

// GRADCONS_OUTPUT_DIR, when set, replaces cfg.output.directory.
std::filesystem::path output_directory(const ExperimentConfig& cfg);

// Runs every (repetition, algorithm) pair. With write_files, writes
// <name>_<label>_rep<r>.csv per run plus the optional dataset and edge list.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files = true);

std::string hex64(std::uint64_t v);

}  // namespace gradcons
