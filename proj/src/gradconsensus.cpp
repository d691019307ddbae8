#include "gradcons/gradconsensus.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gradcons/kernels.hpp"
#include "run_support.hpp"

namespace gradcons {

void Schedule::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (!(eps0 > 0.0)) throw std::invalid_argument("eps0 must be positive");
      break;
    case Kind::Polynomial:
      if (!(eps0 > 0.0)) throw std::invalid_argument("eps0 must be positive");
      if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
      break;
    case Kind::Geometric:
      if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (0,1)");
      break;
  }
}

double eps_at(const Schedule& schedule, std::size_t k) {
  if (k == 0) throw std::invalid_argument("eps_at: outer iteration index starts at 1");
  const double kk = static_cast<double>(k);
  switch (schedule.kind) {
    case Schedule::Kind::Constant:
      return schedule.eps0;
    case Schedule::Kind::Polynomial:
      return schedule.eps0 / std::pow(kk, 1.0 + schedule.eta);
    case Schedule::Kind::Geometric:
      return std::pow(schedule.mu, kk);
  }
  return schedule.eps0;
}

RunTrace run_grad_consensus(const Digraph& g, const ColumnStochasticMatrix& p, const Objective& objective,
                            const GradConsensusConfig& config) {
  config.schedule.validate();
  if (!(config.alpha > 0.0)) throw std::invalid_argument("gradconsensus: step size alpha must be positive");
  const std::size_t n = objective.agents();
  const std::size_t dim = objective.dim();
  if (g.size() != n || p.size() != n) throw std::invalid_argument("gradconsensus: graph, matrix and oracle disagree on agent count");

  RunTrace trace;
  trace.algorithm = "gradconsensus";
  const double lf = objective.constants().lipschitz_sum;
  const double alpha_hat = config.alpha / static_cast<double>(n);
  if (alpha_hat > 2.0 / lf) {
    std::ostringstream msg;
    msg << "alpha/n = " << alpha_hat << " exceeds 2/L_f = " << 2.0 / lf << "; the convex-case rate guarantee does not apply";
    trace.warnings.push_back(msg.str());
  }

  AgentMatrix x(dim, n, 0.0);
  AgentMatrix grads(dim, n);
  AgentMatrix z(dim, n);
  trace.initial_states = x;
  detail::RunClock clock(config.time_iterations);
  std::size_t cum_comm = 0;

  for (std::size_t k = 1; k <= config.stop.max_iterations; ++k) {
    objective.local_gradients(x, grads);
    for (std::size_t i = 0; i < n; ++i) {
      auto zi = z.agent(i);
      std::copy(x.agent(i).begin(), x.agent(i).end(), zi.begin());
      kernels::axpy(-config.alpha, grads.agent(i), zi);
    }
    detail::require_finite(z, trace.algorithm, k, config.alpha);

    const double eps = eps_at(config.schedule, k);
    EpsConsensusResult inner = run_eps_consensus(z, p, g, eps, config.round_cap);
    x = std::move(inner.values);
    cum_comm += inner.rounds_used;

    IterationRecord rec;
    rec.k = k;
    rec.eps = eps;
    rec.inner_rounds = inner.rounds_used;
    rec.cum_comm = cum_comm;
    rec.cum_grads = n * k;
    rec.wall_ms = clock.elapsed_ms();
    if (config.keep_states) rec.states = x;
    trace.records.push_back(std::move(rec));

    if (detail::objective_target_reached(config.stop, objective, x)) break;
  }
  trace.final_states = x;
  return trace;
}

}  // namespace gradcons
