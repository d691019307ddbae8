#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "gradcons/graph.hpp"
#include "gradcons/problems.hpp"
#include "gradcons/trace.hpp"

namespace gradcons {

struct BaselineConfig {
  double alpha = 0.0;
  StopRule stop;
  std::optional<AgentMatrix> initial_states;  // zeros when unset
  bool keep_states = true;
  bool time_iterations = true;

  // Called after every iteration with (k, x(k), auxiliary). The auxiliary
  // block is the tracking variable y(k) for PushPull and empty otherwise.
  std::function<void(std::size_t, const AgentMatrix&, const AgentMatrix&)> observer;
};

// x(k) = W x(k-1) - alpha grad F(x(k-1)). One round per iteration.
RunTrace run_dgd(const DoublyStochasticMatrix& w, const Objective& objective, const BaselineConfig& config);

// x(1) = W x(0) - alpha grad F(x(0));
// x(k+1) = (I + W) x(k) - (I + W)/2 x(k-1) - alpha (grad F(x(k)) - grad F(x(k-1))).
RunTrace run_extra(const DoublyStochasticMatrix& w, const Objective& objective, const BaselineConfig& config);

// x(k+1) = R (x(k) - alpha y(k)); y(k+1) = C y(k) + grad F(x(k+1)) - grad F(x(k));
// y(0) = grad F(x(0)). Two rounds per iteration.
RunTrace run_pushpull(const RowStochasticMatrix& r, const ColumnStochasticMatrix& c, const Objective& objective,
                      const BaselineConfig& config);

}  // namespace gradcons
