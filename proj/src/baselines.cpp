#include "gradcons/baselines.hpp"

#include <stdexcept>
#include <string>

#include "gradcons/kernels.hpp"
#include "run_support.hpp"

namespace gradcons {

namespace {

AgentMatrix starting_point(const Objective& objective, const BaselineConfig& config, const char* algo) {
  if (!(config.alpha > 0.0)) throw std::invalid_argument(std::string(algo) + ": step size alpha must be positive");
  if (!config.initial_states) return AgentMatrix(objective.dim(), objective.agents(), 0.0);
  const AgentMatrix& x0 = *config.initial_states;
  if (x0.dim() != objective.dim() || x0.agents() != objective.agents()) {
    throw std::invalid_argument(std::string(algo) + ": initial states have the wrong shape");
  }
  if (!x0.all_finite()) throw std::invalid_argument(std::string(algo) + ": initial states must be finite");
  return x0;
}

void check_size(std::size_t matrix, const Objective& objective, const char* algo) {
  if (matrix != objective.agents()) throw std::invalid_argument(std::string(algo) + ": matrix and oracle disagree on agent count");
}

class Recorder {
 public:
  Recorder(RunTrace& trace, const BaselineConfig& config, std::size_t agents, std::size_t rounds_per_iteration,
           std::size_t initial_grads)
      : trace_(trace), config_(config), agents_(agents), rounds_(rounds_per_iteration), grads_(initial_grads),
        clock_(config.time_iterations) {}

  void record(std::size_t k, const AgentMatrix& x) {
    comm_ += rounds_;
    grads_ += agents_;
    IterationRecord rec;
    rec.k = k;
    rec.inner_rounds = rounds_;
    rec.cum_comm = comm_;
    rec.cum_grads = grads_;
    rec.wall_ms = clock_.elapsed_ms();
    if (config_.keep_states) rec.states = x;
    trace_.records.push_back(std::move(rec));
  }

 private:
  RunTrace& trace_;
  const BaselineConfig& config_;
  std::size_t agents_;
  std::size_t rounds_;
  std::size_t grads_;
  std::size_t comm_ = 0;
  detail::RunClock clock_;
};

const AgentMatrix kNoAux;

}  // namespace

RunTrace run_dgd(const DoublyStochasticMatrix& w, const Objective& objective, const BaselineConfig& config) {
  check_size(w.size(), objective, "dgd");
  RunTrace trace;
  trace.algorithm = "dgd";
  AgentMatrix x = starting_point(objective, config, "dgd");
  trace.initial_states = x;
  AgentMatrix grads(x.dim(), x.agents());
  AgentMatrix next(x.dim(), x.agents());
  Recorder rec(trace, config, x.agents(), 1, 0);

  for (std::size_t k = 1; k <= config.stop.max_iterations; ++k) {
    objective.local_gradients(x, grads);
    w.mix(x, next);
    kernels::axpy(-config.alpha, grads.raw(), next.raw());
    detail::require_finite(next, trace.algorithm, k, config.alpha);
    std::swap(x, next);
    rec.record(k, x);
    if (config.observer) config.observer(k, x, kNoAux);
    if (detail::objective_target_reached(config.stop, objective, x)) break;
  }
  trace.final_states = x;
  return trace;
}

RunTrace run_extra(const DoublyStochasticMatrix& w, const Objective& objective, const BaselineConfig& config) {
  check_size(w.size(), objective, "extra");
  RunTrace trace;
  trace.algorithm = "extra";
  AgentMatrix x = starting_point(objective, config, "extra");
  trace.initial_states = x;
  const std::size_t p = x.dim(), n = x.agents();
  AgentMatrix x_prev(p, n), wx(p, n), wx_prev(p, n), grads(p, n), grads_prev(p, n), next(p, n);
  Recorder rec(trace, config, n, 1, 0);

  for (std::size_t k = 1; k <= config.stop.max_iterations; ++k) {
    objective.local_gradients(x, grads);
    w.mix(x, wx);
    auto out = next.raw();
    const auto cur = x.raw();
    const auto mixed = wx.raw();
    const auto g = grads.raw();
    if (k == 1) {
      for (std::size_t e = 0; e < out.size(); ++e) out[e] = mixed[e] - config.alpha * g[e];
    } else {
      const auto old = x_prev.raw();
      const auto mixed_old = wx_prev.raw();
      const auto g_old = grads_prev.raw();
      for (std::size_t e = 0; e < out.size(); ++e) {
        out[e] = cur[e] + mixed[e] - 0.5 * (old[e] + mixed_old[e]) - config.alpha * (g[e] - g_old[e]);
      }
    }
    detail::require_finite(next, trace.algorithm, k, config.alpha);
    std::swap(x_prev, x);
    std::swap(x, next);
    std::swap(wx_prev, wx);
    std::swap(grads_prev, grads);
    rec.record(k, x);
    if (config.observer) config.observer(k, x, kNoAux);
    if (detail::objective_target_reached(config.stop, objective, x)) break;
  }
  trace.final_states = x;
  return trace;
}

RunTrace run_pushpull(const RowStochasticMatrix& r, const ColumnStochasticMatrix& c, const Objective& objective,
                      const BaselineConfig& config) {
  check_size(r.size(), objective, "pushpull");
  check_size(c.size(), objective, "pushpull");
  RunTrace trace;
  trace.algorithm = "pushpull";
  AgentMatrix x = starting_point(objective, config, "pushpull");
  trace.initial_states = x;
  const std::size_t p = x.dim(), n = x.agents();
  AgentMatrix y(p, n), grads(p, n), grads_next(p, n), step(p, n), x_next(p, n), y_next(p, n);
  objective.local_gradients(x, grads);
  y = grads;
  Recorder rec(trace, config, n, 2, n);

  for (std::size_t k = 1; k <= config.stop.max_iterations; ++k) {
    step = x;
    kernels::axpy(-config.alpha, y.raw(), step.raw());
    r.mix(step, x_next);
    detail::require_finite(x_next, trace.algorithm, k, config.alpha);
    objective.local_gradients(x_next, grads_next);
    c.mix(y, y_next);
    kernels::axpy(1.0, grads_next.raw(), y_next.raw());
    kernels::axpy(-1.0, grads.raw(), y_next.raw());
    std::swap(x, x_next);
    std::swap(y, y_next);
    std::swap(grads, grads_next);
    rec.record(k, x);
    if (config.observer) config.observer(k, x, y);
    if (detail::objective_target_reached(config.stop, objective, x)) break;
  }
  trace.final_states = x;
  return trace;
}

}  // namespace gradcons
