#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gradcons/agent_matrix.hpp"
#include "gradcons/graph.hpp"

namespace gradcons {

// Push-sum (ratio consensus) state: numerators s, denominators t, ratios r = s/t.
struct PushSumState {
  AgentMatrix s;
  std::vector<double> t;
  AgentMatrix r;
  std::size_t round = 0;
};

// s = z, t = 1, r = z. Throws std::invalid_argument on non-finite input.
PushSumState init_push_sum(const AgentMatrix& z);

// One synchronous round: s <- P s, t <- P t, r = s / t.
PushSumState push_sum_round(const PushSumState& state, const ColumnStochasticMatrix& p);
void push_sum_round_into(const PushSumState& in, const ColumnStochasticMatrix& p, PushSumState& out);

// Restarted max/min flooding. At the first round of each D-block the tracker
// is re-seeded from the ratio snapshot; after D rounds every agent holds the
// componentwise extrema of that snapshot.
struct MinMaxTracker {
  AgentMatrix max;
  AgentMatrix min;
  std::size_t block_index = 0;      // completed D-blocks
  std::size_t rounds_in_block = 0;
};

MinMaxTracker make_tracker(std::size_t dim, std::size_t agents);

MinMaxTracker minmax_round(const MinMaxTracker& tracker, const Digraph& g, const AgentMatrix& r_snapshot);
void minmax_round_into(const MinMaxTracker& in, const Digraph& g, const AgentMatrix& r_snapshot, MinMaxTracker& out);

struct EpsConsensusResult {
  AgentMatrix values;            // per-agent estimates r(kc)
  std::size_t rounds_used = 0;   // kc, a positive multiple of D
  double true_average_gap = 0.0; // max_j ||values_j - mean(z)||, diagnostic only
};

// Step-wise driver for the terminated protocol. Each step() runs one
// synchronous round of the tracker and of push-sum. At rounds uD the
// tracker holds the extrema of r((u-1)D) and every agent evaluates
// ||M^j - m^j||_2 against eps.
class EpsConsensus {
 public:
  EpsConsensus(const AgentMatrix& z, const ColumnStochasticMatrix& p, const Digraph& g);

  void step();

  std::size_t round() const { return state_.round; }
  std::size_t block_length() const { return block_; }
  bool at_block_boundary() const { return state_.round > 0 && state_.round % block_ == 0; }

  // ||M^j - m^j||_2 for one agent.
  double spread_norm(std::size_t agent) const;

  // True at a block boundary when every agent's spread is below eps.
  bool converged(double eps) const;

  const PushSumState& state() const { return state_; }
  const MinMaxTracker& tracker() const { return tracker_; }

 private:
  const ColumnStochasticMatrix& p_;
  const Digraph& g_;
  std::size_t block_;
  PushSumState state_;
  PushSumState scratch_state_;
  MinMaxTracker tracker_;
  MinMaxTracker scratch_tracker_;
};

inline constexpr std::size_t kDefaultRoundCap = 1'000'000;

// Runs EpsConsensus until converged(eps). Throws RuntimeFailure when
// round_cap rounds pass without termination.
EpsConsensusResult run_eps_consensus(const AgentMatrix& z, const ColumnStochasticMatrix& p, const Digraph& g,
                                     double eps, std::size_t round_cap = kDefaultRoundCap);

// D rounds of neighborhood max flooding on scalars; returns the agreed value.
double max_consensus_scalar(std::span<const double> values, const Digraph& g);

}  // namespace gradcons
