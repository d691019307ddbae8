#pragma once

#include <chrono>
#include <string>

#include "gradcons/errors.hpp"
#include "gradcons/problems.hpp"
#include "gradcons/trace.hpp"

namespace gradcons::detail {

class RunClock {
 public:
  explicit RunClock(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

inline bool objective_target_reached(const StopRule& stop, const Objective& objective, const AgentMatrix& states) {
  if (!stop.objective_target || !stop.optimal_value) return false;
  const double residual = objective.total_value(states.agent_mean()) - *stop.optimal_value;
  return residual <= *stop.objective_target;
}

inline void require_finite(const AgentMatrix& states, const std::string& algorithm, std::size_t k, double alpha) {
  if (!states.all_finite()) {
    throw RuntimeFailure(algorithm + ": non-finite iterate at iteration " + std::to_string(k) +
                         " (alpha=" + std::to_string(alpha) + "); the step size is likely too large");
  }
}

}  // namespace gradcons::detail
