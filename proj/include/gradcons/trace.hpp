#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gradcons/agent_matrix.hpp"

namespace gradcons {

// One outer iteration of a distributed run.
struct IterationRecord {
  std::size_t k = 0;
  double eps = 0.0;               // consensus tolerance used at k (0 for baselines)
  std::size_t inner_rounds = 0;   // communication rounds spent in iteration k
  std::size_t cum_comm = 0;       // cumulative communication rounds up to k
  std::size_t cum_grads = 0;      // cumulative local gradient evaluations (n per iteration)
  double wall_ms = 0.0;           // elapsed since the run started
  AgentMatrix states;             // x^i(k), empty when the run does not keep states
};

struct RunTrace {
  std::string algorithm;
  AgentMatrix initial_states;     // x^i(0)
  std::vector<IterationRecord> records;  // k = 1..K
  AgentMatrix final_states;
  std::vector<std::string> warnings;
};

// Shared halting rule: iteration budget, optionally an objective-residual
// target f(x_hat) - f* <= objective_target (requires optimal_value).
struct StopRule {
  std::size_t max_iterations = 1000;
  std::optional<double> objective_target;
  std::optional<double> optimal_value;
};

}  // namespace gradcons
