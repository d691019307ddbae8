#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gradcons/agent_matrix.hpp"
#include "gradcons/problems.hpp"
#include "gradcons/trace.hpp"

namespace gradcons {

struct Violation {
  double value = 0.0;
  bool normalized = true;  // false when the initial mismatch is zero
};

// sum_{i,j} ||x^i(k) - x^j(k)|| / sum_{i,j} ||x^i(0) - x^j(0)||, or the bare
// numerator when the denominator vanishes.
Violation consensus_violation(const AgentMatrix& states, const AgentMatrix& initial);

// sum over ordered pairs of ||x^i - x^j||.
double pairwise_mismatch(const AgentMatrix& states);
double max_pairwise_distance(const AgentMatrix& states);

enum class AgentSelection { Best, Worst };

struct Reference {
  std::vector<double> x;
  double value = 0.0;
};

// Index 0 is k = 0 (the initial states); index t >= 1 is trace.records[t-1].
struct MetricReport {
  std::vector<std::size_t> k;
  std::vector<double> eps;
  std::vector<std::size_t> inner_rounds;
  std::vector<std::size_t> cum_comm;
  std::vector<std::size_t> cum_grads;
  std::vector<double> wall_ms;
  std::vector<double> obj_residual;  // f(x_hat(k)) - f*
  std::vector<double> sol_residual;  // selected agent's ||x^i(k) - x*|| / ||x^i(0) - x*||
  std::vector<double> violation;
  bool violation_normalized = true;
  std::optional<double> rate;        // fitted ratio of the solution residual

  std::size_t size() const { return k.size(); }
};

// Requires every record to carry states.
MetricReport residuals(const RunTrace& trace, const Reference& reference, const Objective& objective,
                       AgentSelection selection = AgentSelection::Best);

// exp of the least-squares slope of log(series[t]) against t over
// t in [first, last). Rejects non-positive values and windows shorter than 2.
double fit_geometric_rate(std::span<const double> series, std::size_t first, std::size_t last);
double fit_geometric_rate(std::span<const double> series);

// ||g - g_hat|| with g = sum_i grad f_i(x^i) and g_hat = sum_i grad f_i(x_hat).
double gradient_mismatch(const Objective& objective, const AgentMatrix& states);

// ||x_hat(k) - x_hat(k-1) + (alpha/n) g(k-1)||, the inexact-descent error v(k).
double inexact_descent_error(const Objective& objective, const AgentMatrix& previous, const AgentMatrix& current,
                             double alpha);

}  // namespace gradcons
