#include "gradcons/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gradcons/kernels.hpp"

namespace gradcons {

double pairwise_mismatch(const AgentMatrix& states) {
  double total = 0.0;
  const std::size_t n = states.agents();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) total += distance2(states.agent(i), states.agent(j));
  }
  return 2.0 * total;
}

double max_pairwise_distance(const AgentMatrix& states) {
  double worst = 0.0;
  const std::size_t n = states.agents();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) worst = std::max(worst, distance2(states.agent(i), states.agent(j)));
  }
  return worst;
}

Violation consensus_violation(const AgentMatrix& states, const AgentMatrix& initial) {
  if (states.dim() != initial.dim() || states.agents() != initial.agents()) {
    throw std::invalid_argument("consensus_violation: state shapes differ");
  }
  const double num = pairwise_mismatch(states);
  const double den = pairwise_mismatch(initial);
  if (den > 0.0) return {num / den, true};
  return {num, false};
}

namespace {

double selected_residual(const AgentMatrix& states, const AgentMatrix& initial, std::span<const double> x_star,
                         AgentSelection selection) {
  double pick = selection == AgentSelection::Best ? INFINITY : 0.0;
  for (std::size_t i = 0; i < states.agents(); ++i) {
    const double start = distance2(initial.agent(i), x_star);
    const double now = distance2(states.agent(i), x_star);
    const double r = start > 0.0 ? now / start : now;
    pick = selection == AgentSelection::Best ? std::min(pick, r) : std::max(pick, r);
  }
  return pick;
}

}  // namespace

MetricReport residuals(const RunTrace& trace, const Reference& reference, const Objective& objective,
                       AgentSelection selection) {
  if (reference.x.size() != objective.dim()) throw std::invalid_argument("residuals: reference has the wrong dimension");
  MetricReport out;
  const AgentMatrix& x0 = trace.initial_states;
  const Violation v0 = consensus_violation(x0, x0);
  out.violation_normalized = v0.normalized;

  auto push = [&](std::size_t k, double eps, std::size_t rounds, std::size_t comm, std::size_t grads, double ms,
                  const AgentMatrix& states) {
    out.k.push_back(k);
    out.eps.push_back(eps);
    out.inner_rounds.push_back(rounds);
    out.cum_comm.push_back(comm);
    out.cum_grads.push_back(grads);
    out.wall_ms.push_back(ms);
    // Round-off can put f(x_hat) a hair below the reference value.
    out.obj_residual.push_back(std::max(0.0, objective.total_value(states.agent_mean()) - reference.value));
    out.sol_residual.push_back(selected_residual(states, x0, reference.x, selection));
    out.violation.push_back(consensus_violation(states, x0).value);
  };

  push(0, 0.0, 0, 0, 0, 0.0, x0);
  for (const IterationRecord& rec : trace.records) {
    if (rec.states.agents() != x0.agents() || rec.states.dim() != x0.dim()) {
      throw std::invalid_argument("residuals: trace records must keep states");
    }
    push(rec.k, rec.eps, rec.inner_rounds, rec.cum_comm, rec.cum_grads, rec.wall_ms, rec.states);
  }

  // Fit over the part of the series that is still above round-off.
  std::size_t last = 0;
  while (last < out.sol_residual.size() && out.sol_residual[last] > 1e-12) ++last;
  if (last >= 3) out.rate = fit_geometric_rate(out.sol_residual, 0, last);
  return out;
}

double fit_geometric_rate(std::span<const double> series, std::size_t first, std::size_t last) {
  if (last > series.size() || first >= last || last - first < 2) {
    throw std::invalid_argument("fit_geometric_rate: window must hold at least two points");
  }
  const double m = static_cast<double>(last - first);
  double mean_t = 0.0, mean_y = 0.0;
  for (std::size_t t = first; t < last; ++t) {
    if (!(series[t] > 0.0)) throw std::invalid_argument("fit_geometric_rate: values must be positive");
    mean_t += static_cast<double>(t);
    mean_y += std::log(series[t]);
  }
  mean_t /= m;
  mean_y /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t t = first; t < last; ++t) {
    const double dt = static_cast<double>(t) - mean_t;
    sxy += dt * (std::log(series[t]) - mean_y);
    sxx += dt * dt;
  }
  return std::exp(sxy / sxx);
}

double fit_geometric_rate(std::span<const double> series) { return fit_geometric_rate(series, 0, series.size()); }

double gradient_mismatch(const Objective& objective, const AgentMatrix& states) {
  const std::size_t p = objective.dim();
  const std::vector<double> mean = states.agent_mean();
  std::vector<double> local(p), at_mean(p);
  std::vector<double> diff(p, 0.0);
  for (std::size_t i = 0; i < states.agents(); ++i) {
    objective.gradient(i, states.agent(i), local);
    objective.gradient(i, mean, at_mean);
    for (std::size_t c = 0; c < p; ++c) diff[c] += local[c] - at_mean[c];
  }
  return norm2(diff);
}

double inexact_descent_error(const Objective& objective, const AgentMatrix& previous, const AgentMatrix& current,
                             double alpha) {
  const std::size_t n = objective.agents();
  AgentMatrix grads(objective.dim(), n);
  objective.local_gradients(previous, grads);
  std::vector<double> v = current.agent_mean();
  const std::vector<double> prev_mean = previous.agent_mean();
  kernels::axpy(-1.0, prev_mean, v);
  kernels::axpy(alpha / static_cast<double>(n), grads.agent_sum(), v);
  return norm2(v);
}

}  // namespace gradcons
