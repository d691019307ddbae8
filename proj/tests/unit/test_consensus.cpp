#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "gradcons/consensus.hpp"
#include "gradcons/errors.hpp"
#include "oracles.hpp"

using namespace gradcons;

namespace {

AgentMatrix scalars(std::initializer_list<double> v) {
  AgentMatrix m(1, v.size());
  std::size_t j = 0;
  for (double x : v) m(0, j++) = x;
  return m;
}

bool within_ulps(double a, double b, int ulps) {
  return std::abs(a - b) <= ulps * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_SUITE("consensus") {

TEST_CASE("init_push_sum") {
  const PushSumState zero = init_push_sum(AgentMatrix(3, 4, 0.0));
  CHECK(zero.s == AgentMatrix(3, 4, 0.0));
  CHECK(zero.r == AgentMatrix(3, 4, 0.0));
  CHECK(zero.t == std::vector<double>(4, 1.0));
  CHECK(zero.round == 0);

  AgentMatrix z(2, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    z(0, j) = 1.5;
    z(1, j) = -2.0;
  }
  const PushSumState same = init_push_sum(z);
  CHECK(same.r == z);
  double t_sum = 0.0;
  for (double t : same.t) t_sum += t;
  CHECK(t_sum == 3.0);

  z(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(init_push_sum(z), std::invalid_argument);
}

TEST_CASE("one push-sum round on the 3-cycle by hand") {
  const Digraph g = directed_cycle(3);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const PushSumState next = push_sum_round(init_push_sum(scalars({0, 3, 6})), p);
  CHECK(next.s(0, 0) == 3.0);
  CHECK(next.s(0, 1) == 1.5);
  CHECK(next.s(0, 2) == 4.5);
  CHECK(next.t == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(next.r == next.s);
  CHECK(next.round == 1);
}

TEST_CASE("consensual input stays put up to rounding") {
  const Digraph g = generate_erdos_renyi(8, 0.3, 4);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  AgentMatrix z(3, 8);
  for (std::size_t j = 0; j < 8; ++j) {
    z(0, j) = 0.1;
    z(1, j) = -7.25;
    z(2, j) = 1e6 / 3.0;
  }
  PushSumState st = init_push_sum(z);
  for (int k = 0; k < 50; ++k) st = push_sum_round(st, p);
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t c = 0; c < 3; ++c) CHECK(within_ulps(st.r(c, j), z(c, j), 8));
}

TEST_CASE("push-sum converges to the exact mean") {
  std::mt19937_64 rng(10);
  const Digraph g = generate_erdos_renyi(10, 0.25, 10);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const AgentMatrix z = oracle::random_states(3, 10, rng);
  const auto mean = oracle::mean(z);
  PushSumState st = init_push_sum(z);
  for (int k = 0; k < 200; ++k) st = push_sum_round(st, p);
  for (std::size_t j = 0; j < 10; ++j) CHECK(oracle::agent_dist(st.r, j, mean) < 1e-8);
}

TEST_CASE("property: mass conservation and positive denominators") {
  std::mt19937_64 rng(11);
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    const std::size_t n = 3 + inst % 15;
    const Digraph g = generate_erdos_renyi(n, 0.3, 1000 + inst);
    const ColumnStochasticMatrix p = equal_neighbor_weights(g);
    const AgentMatrix z = oracle::random_states(2, n, rng);
    const std::vector<double> mass0 = z.agent_sum();
    PushSumState st = init_push_sum(z);
    for (int k = 0; k < 100; ++k) {
      push_sum_round_into(PushSumState(st), p, st);
      for (double t : st.t) REQUIRE(t > 0.0);
    }
    const std::vector<double> mass = st.s.agent_sum();
    double t_sum = 0.0;
    for (double t : st.t) t_sum += t;
    CHECK(std::abs(t_sum - n) <= 1e-10 * n);
    for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(mass[c] - mass0[c]) <= 1e-10 * (std::abs(mass0[c]) + 1.0));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < 2; ++c) CHECK(st.r(c, j) == st.s(c, j) * (1.0 / st.t[j]));
  }
}

TEST_CASE("min/max tracker: single node, constant input, path propagation") {
  const Digraph single(1, {});
  MinMaxTracker tr = make_tracker(2, 1);
  AgentMatrix r(2, 1);
  r(0, 0) = 4.0;
  r(1, 0) = -1.0;
  for (int k = 0; k < 3; ++k) {
    tr = minmax_round(tr, single, r);
    CHECK(tr.max == r);
    CHECK(tr.min == r);
  }

  const Digraph cyc = directed_cycle(5);
  const AgentMatrix flat(1, 5, 2.5);
  MinMaxTracker flat_tr = make_tracker(1, 5);
  for (std::size_t k = 0; k < cyc.diameter_bound(); ++k) {
    flat_tr = minmax_round(flat_tr, cyc, flat);
    CHECK(flat_tr.max == flat);
    CHECK(flat_tr.min == flat);
  }

  // Path 0 -> 1 -> 2 -> 3 with the return arcs so it is strongly connected;
  // the value at the tail needs exactly 3 hops to reach the head.
  const Digraph path = bidirectional_path(4);
  REQUIRE(path.diameter_bound() == 3);
  const AgentMatrix snap = scalars({9.0, 0.0, 0.0, 0.0});
  MinMaxTracker p_tr = make_tracker(1, 4);
  for (std::size_t k = 1; k <= 3; ++k) {
    p_tr = minmax_round(p_tr, path, snap);
    CHECK((p_tr.max(0, 3) == 9.0) == (k == 3));
  }
  CHECK(p_tr.block_index == 1);
  CHECK(p_tr.rounds_in_block == 0);
}

TEST_CASE("property: tracker reaches exact global extrema at every block boundary") {
  std::mt19937_64 rng(12);
  for (std::uint64_t inst = 0; inst < 30; ++inst) {
    const std::size_t n = 4 + inst % 12;
    const Digraph g = generate_erdos_renyi(n, 0.25, 2000 + inst);
    const ColumnStochasticMatrix p = equal_neighbor_weights(g);
    EpsConsensus run(oracle::random_states(3, n, rng), p, g);
    AgentMatrix snapshot = run.state().r;
    for (int step = 0; step < 5 * static_cast<int>(run.block_length()); ++step) {
      run.step();
      if (!run.at_block_boundary()) continue;
      for (std::size_t c = 0; c < 3; ++c) {
        double hi = -INFINITY, lo = INFINITY;
        for (std::size_t j = 0; j < n; ++j) {
          hi = std::max(hi, snapshot(c, j));
          lo = std::min(lo, snapshot(c, j));
        }
        for (std::size_t j = 0; j < n; ++j) {
          CHECK(run.tracker().max(c, j) == hi);
          CHECK(run.tracker().min(c, j) == lo);
        }
      }
      snapshot = run.state().r;
    }
  }
}

TEST_CASE("run_eps_consensus: loose tolerance stops at the first check") {
  std::mt19937_64 rng(13);
  const Digraph g = generate_erdos_renyi(9, 0.3, 13);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const AgentMatrix z = oracle::random_states(2, 9, rng);
  const EpsConsensusResult res = run_eps_consensus(z, p, g, 1e6);
  CHECK(res.rounds_used == g.diameter_bound());
  PushSumState st = init_push_sum(z);
  for (std::size_t k = 0; k < g.diameter_bound(); ++k) st = push_sum_round(st, p);
  CHECK(res.values == st.r);
}

TEST_CASE("run_eps_consensus on the 3-cycle") {
  const Digraph g = directed_cycle(3);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const EpsConsensusResult res = run_eps_consensus(scalars({0, 3, 6}), p, g, 1e-6);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(res.values(0, j) - 3.0) <= 1e-6);
  CHECK(res.rounds_used % g.diameter_bound() == 0);
}

TEST_CASE("run_eps_consensus: identical inputs terminate at D") {
  const Digraph g = generate_erdos_renyi(6, 0.4, 2);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const AgentMatrix z(2, 6, 1.25);
  const EpsConsensusResult res = run_eps_consensus(z, p, g, 1e-9);
  CHECK(res.rounds_used == g.diameter_bound());
  for (double v : res.values.raw()) CHECK(within_ulps(v, 1.25, 4));
}

TEST_CASE("property: termination soundness on random instances") {
  std::mt19937_64 rng(14);
  for (std::uint64_t inst = 0; inst < 60; ++inst) {
    const std::size_t n = 3 + inst % 18;
    const double eps = inst % 2 ? 1e-3 : 1e-6;
    const Digraph g = generate_erdos_renyi(n, 0.3, 3000 + inst);
    const ColumnStochasticMatrix p = equal_neighbor_weights(g);
    const AgentMatrix z = oracle::random_states(1 + inst % 5, n, rng);
    const auto mean = oracle::mean(z);
    const EpsConsensusResult res = run_eps_consensus(z, p, g, eps);
    CHECK(res.rounds_used % g.diameter_bound() == 0);
    CHECK(res.rounds_used > 0);
    for (std::size_t j = 0; j < n; ++j) CHECK(oracle::agent_dist(res.values, j, mean) <= eps);
  }
}

TEST_CASE("an over-estimated diameter bound is still sound") {
  std::mt19937_64 rng(15);
  const Digraph g = generate_erdos_renyi(12, 0.25, 15).with_diameter_bound(9);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const AgentMatrix z = oracle::random_states(3, 12, rng);
  const auto mean = oracle::mean(z);
  const EpsConsensusResult res = run_eps_consensus(z, p, g, 1e-7);
  CHECK(res.rounds_used % 9 == 0);
  for (std::size_t j = 0; j < 12; ++j) CHECK(oracle::agent_dist(res.values, j, mean) <= 1e-7);
}

TEST_CASE("run_eps_consensus errors") {
  const Digraph g = directed_cycle(3);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  CHECK_THROWS_AS(run_eps_consensus(scalars({0, 1, 2}), p, g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(run_eps_consensus(scalars({0, 1, 2}), p, g, 1e-12, 4), RuntimeFailure);
}

TEST_CASE("max_consensus_scalar") {
  const Digraph cyc = directed_cycle(3);
  CHECK(max_consensus_scalar(std::vector<double>{0.1, 0.5, 0.3}, cyc) == 0.5);
  CHECK(max_consensus_scalar(std::vector<double>{2.0, 2.0, 2.0}, cyc) == 2.0);
  CHECK(max_consensus_scalar(std::vector<double>{-4.0}, Digraph(1, {})) == -4.0);
}

}  // TEST_SUITE
