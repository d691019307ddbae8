#include <cmath>
#include <random>

#include "doctest.h"
#include "gradcons/baselines.hpp"
#include "gradcons/errors.hpp"
#include "oracles.hpp"

using namespace gradcons;

namespace {

struct Setup {
  Digraph g;
  AuxMatrices aux;
  ColumnStochasticMatrix c;
  explicit Setup(Digraph graph)
      : g(std::move(graph)), aux(baseline_matrices(g)), c(equal_neighbor_weights(g)) {}
};

QuadraticObjective single_agent() {
  AgentMatrix a(3, 1), q(3, 1);
  a(0, 0) = 1.0, a(1, 0) = -2.0, a(2, 0) = 0.5;
  q(0, 0) = 0.7, q(1, 0) = 1.9, q(2, 0) = 1.2;
  return QuadraticObjective(a, q);
}

// Plain gradient descent from 0.
std::vector<std::vector<double>> gd(const Objective& f, double alpha, std::size_t iters) {
  std::vector<double> x(f.dim(), 0.0), g(f.dim());
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < iters; ++k) {
    f.gradient(0, x, g);
    for (std::size_t c = 0; c < x.size(); ++c) x[c] = x[c] - alpha * g[c];
    out.push_back(x);
  }
  return out;
}

double worst_agent_error(const AgentMatrix& x, const std::vector<double>& xs) {
  double worst = 0.0;
  for (std::size_t j = 0; j < x.agents(); ++j) worst = std::max(worst, oracle::agent_dist(x, j, xs));
  return worst;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("single agent: every baseline reduces to gradient descent") {
  const QuadraticObjective f = single_agent();
  const Setup s(Digraph(1, {}));
  BaselineConfig cfg;
  cfg.alpha = 0.3;
  cfg.stop.max_iterations = 40;
  const auto ref = gd(f, cfg.alpha, 40);

  const RunTrace dgd = run_dgd(s.aux.doubly_stochastic, f, cfg);
  const RunTrace extra = run_extra(s.aux.doubly_stochastic, f, cfg);
  const RunTrace pp = run_pushpull(s.aux.row_stochastic, s.c, f, cfg);
  REQUIRE(dgd.records.size() == 40);
  REQUIRE(extra.records.size() == 40);
  REQUIRE(pp.records.size() == 40);
  for (std::size_t k = 0; k < 40; ++k) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(dgd.records[k].states(c, 0) == ref[k][c]);
      CHECK(std::abs(extra.records[k].states(c, 0) - ref[k][c]) <= 1e-14 * std::max(1.0, std::abs(ref[k][c])));
      CHECK(std::abs(pp.records[k].states(c, 0) - ref[k][c]) <= 1e-14 * std::max(1.0, std::abs(ref[k][c])));
    }
  }
}

TEST_CASE("zero gradients and a consensual start leave the states unchanged") {
  const std::size_t n = 6;
  AgentMatrix a(2, n), q(2, n, 1.0);
  for (std::size_t j = 0; j < n; ++j) a(0, j) = 3.0, a(1, j) = -1.0;
  const QuadraticObjective f(a, q);
  const Setup s(generate_erdos_renyi(n, 0.4, 5));
  BaselineConfig cfg;
  cfg.alpha = 0.2;
  cfg.stop.max_iterations = 10;
  cfg.initial_states = a;
  for (const RunTrace& t : {run_dgd(s.aux.doubly_stochastic, f, cfg), run_extra(s.aux.doubly_stochastic, f, cfg),
                            run_pushpull(s.aux.row_stochastic, s.c, f, cfg)}) {
    INFO(t.algorithm);
    for (const auto& rec : t.records) CHECK(worst_agent_error(rec.states, {3.0, -1.0}) < 1e-14);
  }
}

TEST_CASE("property: pushpull tracking variable sums to the sum of gradients") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 4 + trial % 5;
    const Setup s(generate_erdos_renyi(n, 0.35, 100 + trial));
    const QuadraticObjective f = generate_quadratic(n, 3, QuadraticParams{.seed = static_cast<std::uint64_t>(trial)});
    BaselineConfig cfg;
    cfg.alpha = 0.05;
    cfg.stop.max_iterations = 30;
    cfg.initial_states = oracle::random_states(3, n, rng, -2.0, 2.0);
    AgentMatrix grads(3, n);
    double worst = 0.0;
    cfg.observer = [&](std::size_t, const AgentMatrix& x, const AgentMatrix& y) {
      f.local_gradients(x, grads);
      const auto gy = y.agent_sum();
      const auto gg = grads.agent_sum();
      for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, std::abs(gy[c] - gg[c]));
    };
    run_pushpull(s.aux.row_stochastic, s.c, f, cfg);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("exact methods converge on a strongly convex quadratic, DGD keeps a bias") {
  const std::size_t n = 10;
  const Setup s(generate_erdos_renyi(n, 0.3, 3));
  const QuadraticObjective f = generate_quadratic(n, 5, QuadraticParams{.seed = 3});
  const std::vector<double> xs = *f.closed_form_minimizer();
  BaselineConfig cfg;
  cfg.alpha = 0.1;
  cfg.stop.max_iterations = 3000;
  cfg.keep_states = false;

  CHECK(worst_agent_error(run_extra(s.aux.doubly_stochastic, f, cfg).final_states, xs) < 1e-9);
  CHECK(worst_agent_error(run_pushpull(s.aux.row_stochastic, s.c, f, cfg).final_states, xs) < 1e-9);
  const double dgd = worst_agent_error(run_dgd(s.aux.doubly_stochastic, f, cfg).final_states, xs);
  CHECK(dgd > 1e-4);
  CHECK(dgd < 1.0);
}

TEST_CASE("accounting per iteration") {
  const std::size_t n = 5;
  const Setup s(directed_cycle(n));
  const QuadraticObjective f = generate_quadratic(n, 2, QuadraticParams{.seed = 9});
  BaselineConfig cfg;
  cfg.alpha = 0.05;
  cfg.stop.max_iterations = 7;
  const RunTrace dgd = run_dgd(s.aux.doubly_stochastic, f, cfg);
  const RunTrace extra = run_extra(s.aux.doubly_stochastic, f, cfg);
  const RunTrace pp = run_pushpull(s.aux.row_stochastic, s.c, f, cfg);
  CHECK(dgd.algorithm == "dgd");
  CHECK(extra.algorithm == "extra");
  CHECK(pp.algorithm == "pushpull");
  for (std::size_t k = 1; k <= 7; ++k) {
    CHECK(dgd.records[k - 1].k == k);
    CHECK(dgd.records[k - 1].cum_comm == k);
    CHECK(extra.records[k - 1].cum_comm == k);
    CHECK(pp.records[k - 1].cum_comm == 2 * k);
    CHECK(dgd.records[k - 1].cum_grads == n * k);
    CHECK(extra.records[k - 1].cum_grads == n * k);
    CHECK(pp.records[k - 1].cum_grads == n * (k + 1));
    CHECK(dgd.records[k - 1].eps == 0.0);
  }
  CHECK(dgd.initial_states == AgentMatrix(2, n, 0.0));
  CHECK(dgd.final_states == dgd.records.back().states);
}

TEST_CASE("baseline preconditions and divergence") {
  const Setup s(directed_cycle(3));
  const QuadraticObjective f = generate_quadratic(3, 2, QuadraticParams{.seed = 1});
  BaselineConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(run_dgd(s.aux.doubly_stochastic, f, cfg), std::invalid_argument);
  cfg.alpha = 0.1;
  cfg.initial_states = AgentMatrix(3, 3);
  CHECK_THROWS_AS(run_extra(s.aux.doubly_stochastic, f, cfg), std::invalid_argument);
  cfg.initial_states.reset();
  cfg.alpha = 1e200;
  cfg.stop.max_iterations = 50;
  CHECK_THROWS_AS(run_pushpull(s.aux.row_stochastic, s.c, f, cfg), RuntimeFailure);
}

}  // TEST_SUITE
