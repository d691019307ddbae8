#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gradcons/gradconsensus.hpp"
#include "gradcons/metrics.hpp"
#include "oracles.hpp"

using namespace gradcons;

namespace {

AgentMatrix from_rows(std::size_t dim, std::vector<std::vector<double>> agents) {
  AgentMatrix m(dim, agents.size());
  for (std::size_t j = 0; j < agents.size(); ++j)
    for (std::size_t c = 0; c < dim; ++c) m(c, j) = agents[j][c];
  return m;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("violation examples") {
  const AgentMatrix init = from_rows(2, {{0, 0}, {3, 4}, {6, 8}});
  CHECK(consensus_violation(init, init).value == 1.0);
  CHECK(consensus_violation(AgentMatrix(2, 3, 7.0), init).value == 0.0);
  const AgentMatrix half = from_rows(2, {{0, 0}, {1.5, 2}, {3, 4}});
  CHECK(consensus_violation(half, init).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(consensus_violation(half, init).normalized);
  // 2 * (5 + 10 + 5)
  CHECK(pairwise_mismatch(init) == 40.0);
  CHECK(max_pairwise_distance(init) == 10.0);

  const Violation raw = consensus_violation(half, AgentMatrix(2, 3, 1.0));
  CHECK_FALSE(raw.normalized);
  CHECK(raw.value == doctest::Approx(20.0));
  CHECK_THROWS_AS(consensus_violation(half, AgentMatrix(2, 4)), std::invalid_argument);
}

TEST_CASE("property: pairwise mismatch matches brute force and is permutation invariant") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 9, dim = 1 + trial % 4;
    const AgentMatrix x = oracle::random_states(dim, n, rng);
    CHECK(pairwise_mismatch(x) == doctest::Approx(oracle::pairwise_sum(x)).epsilon(1e-12));
    CHECK(max_pairwise_distance(x) == doctest::Approx(oracle::max_pairwise(x)).epsilon(1e-12));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    AgentMatrix y(dim, n);
    for (std::size_t j = 0; j < n; ++j) std::copy(x.agent(perm[j]).begin(), x.agent(perm[j]).end(), y.agent(j).begin());
    CHECK(pairwise_mismatch(y) == doctest::Approx(pairwise_mismatch(x)).epsilon(1e-12));
  }
}

TEST_CASE("property: eps-consensual states have mismatch at most n^2 * 2 eps") {
  std::mt19937_64 rng(23);
  const Digraph g = generate_erdos_renyi(8, 0.3, 4);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  for (int trial = 0; trial < 20; ++trial) {
    const double eps = std::pow(10.0, -1.0 - trial % 6);
    const EpsConsensusResult r = run_eps_consensus(oracle::random_states(3, 8, rng), p, g, eps);
    CHECK(pairwise_mismatch(r.values) <= 64.0 * 2.0 * eps);
  }
}

TEST_CASE("geometric rate fit") {
  std::vector<double> exact(30);
  for (std::size_t t = 0; t < exact.size(); ++t) exact[t] = 3.0 * std::pow(0.9, static_cast<double>(t));
  CHECK(fit_geometric_rate(exact) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(fit_geometric_rate(exact, 10, 20) == doctest::Approx(0.9).epsilon(1e-12));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> jitter(0.95, 1.05);
  std::vector<double> noisy(200);
  for (std::size_t t = 0; t < noisy.size(); ++t) noisy[t] = std::pow(0.8, static_cast<double>(t)) * jitter(rng);
  CHECK(std::abs(fit_geometric_rate(noisy) - 0.8) < 1e-3);

  CHECK(fit_geometric_rate(std::vector<double>(10, 2.5)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_geometric_rate(std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_geometric_rate(std::vector<double>{1.0, 0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(fit_geometric_rate(exact, 5, 40), std::invalid_argument);
}

TEST_CASE("residuals on a hand-built trace") {
  // f = 1/2 (x-1)^2 + 1/2 (x-3)^2, x* = 2, f* = 1.
  const QuadraticObjective f(from_rows(1, {{1.0}, {3.0}}), AgentMatrix(1, 2, 1.0));
  const Reference ref{{2.0}, 1.0};
  RunTrace trace;
  trace.initial_states = from_rows(1, {{0.0}, {4.0}});
  IterationRecord r1;
  r1.k = 1, r1.cum_comm = 3, r1.cum_grads = 2, r1.inner_rounds = 3, r1.eps = 0.1;
  r1.states = from_rows(1, {{1.0}, {2.5}});
  IterationRecord r2 = r1;
  r2.k = 2, r2.cum_comm = 6, r2.cum_grads = 4;
  r2.states = from_rows(1, {{2.0}, {2.0}});
  trace.records = {r1, r2};

  const MetricReport best = residuals(trace, ref, f);
  REQUIRE(best.size() == 3);
  CHECK(best.k == std::vector<std::size_t>{0, 1, 2});
  CHECK(best.sol_residual[0] == 1.0);
  CHECK(best.sol_residual[1] == 0.25);  // agent 1: 0.5 / 2
  CHECK(best.sol_residual[2] == 0.0);
  CHECK(best.obj_residual[0] == 0.0);   // x_hat(0) = 2
  CHECK(best.obj_residual[1] == doctest::Approx(0.0625));  // x_hat = 1.75
  CHECK(best.violation[0] == 1.0);
  CHECK(best.violation[1] == 0.375);
  CHECK(best.violation[2] == 0.0);
  CHECK(best.cum_comm == std::vector<std::size_t>{0, 3, 6});
  CHECK(best.violation_normalized);

  const MetricReport worst = residuals(trace, ref, f, AgentSelection::Worst);
  CHECK(worst.sol_residual[1] == 0.5);  // agent 0: 1 / 2

  trace.records[1].states = AgentMatrix();
  CHECK_THROWS_AS(residuals(trace, ref, f), std::invalid_argument);
}

TEST_CASE("residuals at the optimum") {
  const QuadraticObjective f = generate_quadratic(4, 3, QuadraticParams{.seed = 2});
  const std::vector<double> xs = *f.closed_form_minimizer();
  const Reference ref{xs, f.total_value(xs)};
  RunTrace trace;
  trace.initial_states = AgentMatrix(3, 4, 0.0);
  IterationRecord rec;
  rec.k = 1;
  rec.states = AgentMatrix(3, 4);
  for (std::size_t j = 0; j < 4; ++j) std::copy(xs.begin(), xs.end(), rec.states.agent(j).begin());
  trace.records.push_back(rec);
  const MetricReport m = residuals(trace, ref, f);
  CHECK(m.sol_residual[1] == 0.0);
  CHECK(m.obj_residual[1] < 1e-15);
  CHECK(m.violation[1] == 0.0);
  CHECK_FALSE(m.violation_normalized);  // identical zero starts
  CHECK(m.sol_residual[0] == 1.0);
}

TEST_CASE("gradient mismatch and inexact-descent error") {
  const QuadraticObjective f(from_rows(1, {{1.0}, {3.0}}), from_rows(1, {{1.0}, {2.0}}));
  const AgentMatrix same = from_rows(1, {{0.5}, {0.5}});
  CHECK(gradient_mismatch(f, same) == 0.0);
  // x = (0, 1), mean 0.5: local grads (-1, -4), at mean (-0.5, -5).
  CHECK(gradient_mismatch(f, from_rows(1, {{0.0}, {1.0}})) == doctest::Approx(0.5));
  // Exact centralized step: error 0.
  const AgentMatrix prev = from_rows(1, {{0.0}, {0.0}});
  const double alpha = 0.2;  // sum of grads at 0 is -7, x_hat moves by 0.1 * 7
  CHECK(inexact_descent_error(f, prev, from_rows(1, {{0.7}, {0.7}}), alpha) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(inexact_descent_error(f, prev, from_rows(1, {{0.9}, {0.7}}), alpha) == doctest::Approx(0.1));
}

}  // TEST_SUITE
