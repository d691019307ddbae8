#include "gradcons/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "gradcons/errors.hpp"
#include "gradcons/kernels.hpp"

namespace gradcons {

PushSumState init_push_sum(const AgentMatrix& z) {
  if (!z.all_finite()) throw std::invalid_argument("push-sum initial values must be finite");
  return PushSumState{z, std::vector<double>(z.agents(), 1.0), z, 0};
}

void push_sum_round_into(const PushSumState& in, const ColumnStochasticMatrix& p, PushSumState& out) {
  const std::size_t n = in.s.agents();
  if (p.size() != n) throw std::invalid_argument("push-sum: weight matrix size does not match agent count");
  if (out.s.agents() != n || out.s.dim() != in.s.dim()) {
    out.s = AgentMatrix(in.s.dim(), n);
    out.r = AgentMatrix(in.s.dim(), n);
    out.t.assign(n, 0.0);
  }
  p.mix(in.s, out.s);
  p.mix(std::span<const double>(in.t), std::span<double>(out.t));
  for (std::size_t j = 0; j < n; ++j) kernels::scale_into(1.0 / out.t[j], out.s.agent(j), out.r.agent(j));
  out.round = in.round + 1;
}

PushSumState push_sum_round(const PushSumState& state, const ColumnStochasticMatrix& p) {
  PushSumState next;
  push_sum_round_into(state, p, next);
  return next;
}

MinMaxTracker make_tracker(std::size_t dim, std::size_t agents) {
  return MinMaxTracker{AgentMatrix(dim, agents), AgentMatrix(dim, agents), 0, 0};
}

void minmax_round_into(const MinMaxTracker& in, const Digraph& g, const AgentMatrix& r_snapshot, MinMaxTracker& out) {
  const std::size_t n = g.size();
  const std::size_t block = g.diameter_bound();
  if (r_snapshot.agents() != n) throw std::invalid_argument("minmax: snapshot agent count does not match graph");
  const bool restart = in.rounds_in_block == 0;
  const AgentMatrix& src_max = restart ? r_snapshot : in.max;
  const AgentMatrix& src_min = restart ? r_snapshot : in.min;
  if (out.max.agents() != n || out.max.dim() != r_snapshot.dim()) out = make_tracker(r_snapshot.dim(), n);

  for (std::size_t j = 0; j < n; ++j) {
    auto mx = out.max.agent(j);
    auto mn = out.min.agent(j);
    std::copy_n(src_max.agent(j).begin(), mx.size(), mx.begin());
    std::copy_n(src_min.agent(j).begin(), mn.size(), mn.begin());
    for (std::size_t l : g.in_neighbors(j)) {
      kernels::max_inplace(mx, src_max.agent(l));
      kernels::min_inplace(mn, src_min.agent(l));
    }
  }
  // A single node (D = 0) keeps restarting every round.
  out.rounds_in_block = in.rounds_in_block + 1;
  out.block_index = in.block_index;
  if (out.rounds_in_block >= block) {
    out.rounds_in_block = 0;
    ++out.block_index;
  }
}

MinMaxTracker minmax_round(const MinMaxTracker& tracker, const Digraph& g, const AgentMatrix& r_snapshot) {
  MinMaxTracker next;
  minmax_round_into(tracker, g, r_snapshot, next);
  return next;
}

namespace {

std::size_t effective_block(const Digraph& g) {
  if (!g.strongly_connected()) throw std::invalid_argument("eps-consensus requires a strongly connected graph");
  // With one agent the diameter is 0; checking every round is exact.
  return std::max<std::size_t>(g.diameter_bound(), 1);
}

}  // namespace

EpsConsensus::EpsConsensus(const AgentMatrix& z, const ColumnStochasticMatrix& p, const Digraph& g)
    : p_(p), g_(g), block_(effective_block(g)), state_(init_push_sum(z)), tracker_(make_tracker(z.dim(), z.agents())) {
  if (p.size() != g.size() || z.agents() != g.size()) throw std::invalid_argument("eps-consensus: size mismatch between values, matrix and graph");
  // The tracker is seeded from r(0) by its first round; M(0) = m(0) = z.
  tracker_.max = z;
  tracker_.min = z;
}

void EpsConsensus::step() {
  minmax_round_into(tracker_, g_, state_.r, scratch_tracker_);
  std::swap(tracker_, scratch_tracker_);
  push_sum_round_into(state_, p_, scratch_state_);
  std::swap(state_, scratch_state_);
}

double EpsConsensus::spread_norm(std::size_t agent) const {
  return distance2(tracker_.max.agent(agent), tracker_.min.agent(agent));
}

bool EpsConsensus::converged(double eps) const {
  if (!at_block_boundary()) return false;
  for (std::size_t j = 0; j < state_.r.agents(); ++j) {
    if (!(spread_norm(j) < eps)) return false;
  }
  return true;
}

EpsConsensusResult run_eps_consensus(const AgentMatrix& z, const ColumnStochasticMatrix& p, const Digraph& g, double eps,
                                     std::size_t round_cap) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps-consensus tolerance must be positive");
  EpsConsensus protocol(z, p, g);
  while (!protocol.converged(eps)) {
    if (protocol.round() >= round_cap) {
      double spread = 0.0;
      for (std::size_t j = 0; j < z.agents(); ++j) spread = std::max(spread, protocol.spread_norm(j));
      char buf[160];
      std::snprintf(buf, sizeof buf, " rounds (eps=%.3g, last spread %.3g); eps may be below round-off of the values",
                    eps, spread);
      throw RuntimeFailure("eps-consensus did not terminate within " + std::to_string(round_cap) + buf);
    }
    protocol.step();
  }
  EpsConsensusResult result{protocol.state().r, protocol.round(), 0.0};
  const std::vector<double> mean = z.agent_mean();
  for (std::size_t j = 0; j < z.agents(); ++j) {
    result.true_average_gap = std::max(result.true_average_gap, distance2(result.values.agent(j), mean));
  }
  return result;
}

double max_consensus_scalar(std::span<const double> values, const Digraph& g) {
  const std::size_t n = g.size();
  if (values.size() != n) throw std::invalid_argument("max consensus: one value per agent required");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("max consensus: values must be finite");
  }
  std::vector<double> current(values.begin(), values.end());
  std::vector<double> next(n);
  for (std::size_t round = 0; round < g.diameter_bound(); ++round) {
    for (std::size_t j = 0; j < n; ++j) {
      double best = current[j];
      for (std::size_t l : g.in_neighbors(j)) best = std::max(best, current[l]);
      next[j] = best;
    }
    std::swap(current, next);
  }
  if (std::any_of(current.begin(), current.end(), [&](double v) { return v != current.front(); })) {
    throw std::logic_error("max consensus did not agree after D rounds; diameter bound is wrong");
  }
  return current.front();
}

}  // namespace gradcons
