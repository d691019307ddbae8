#include <cmath>
#include <limits>

#include "doctest.h"
#include "gradcons/bounds.hpp"
#include "gradcons/errors.hpp"
#include "gradcons/gradconsensus.hpp"
#include "gradcons/metrics.hpp"
#include "oracles.hpp"

using namespace gradcons;

namespace {

class ZeroObjective final : public Objective {
 public:
  ZeroObjective(std::size_t n, std::size_t p) : n_(n), p_(p) {
    constants_.lipschitz.assign(n, 1.0);
    finish_constants();
  }
  std::size_t agents() const override { return n_; }
  std::size_t dim() const override { return p_; }
  double value(std::size_t, std::span<const double>) const override { return 0.0; }
  void gradient(std::size_t, std::span<const double>, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
  }
  std::uint64_t digest() const override { return 0; }

 private:
  std::size_t n_, p_;
};

AgentMatrix column(std::initializer_list<double> v) {
  AgentMatrix m(1, v.size());
  std::size_t j = 0;
  for (double x : v) m(0, j++) = x;
  return m;
}

}  // namespace

TEST_SUITE("gradconsensus") {

TEST_CASE("eps_at") {
  CHECK(eps_at(Schedule::polynomial(1.0, 0.5), 1) == 1.0);
  CHECK(eps_at(Schedule::polynomial(0.01, 0.5), 4) == doctest::Approx(0.00125).epsilon(1e-15));
  CHECK(eps_at(Schedule::geometric(0.9), 2) == doctest::Approx(0.81).epsilon(1e-15));
  CHECK(eps_at(Schedule::constant(0.01), 37) == 0.01);
  CHECK_THROWS_AS(eps_at(Schedule::constant(0.01), 0), std::invalid_argument);
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_WITH(Schedule::polynomial(0.01, 1.5).validate(), "eta must lie in (0,1)");
  CHECK_THROWS(Schedule::polynomial(0.01, 0.0).validate());
  CHECK_THROWS(Schedule::geometric(1.0).validate());
  CHECK_THROWS(Schedule::constant(-1.0).validate());
  CHECK_NOTHROW(Schedule::geometric(0.5).validate());
}

TEST_CASE("zero gradients keep every agent at zero with kc = D") {
  const Digraph g = generate_erdos_renyi(7, 0.3, 21);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const ZeroObjective obj(7, 3);
  GradConsensusConfig cfg;
  cfg.alpha = 0.5;
  cfg.schedule = Schedule::constant(1e-3);
  cfg.stop.max_iterations = 20;
  const RunTrace tr = run_grad_consensus(g, p, obj, cfg);
  REQUIRE(tr.records.size() == 20);
  for (const auto& rec : tr.records) {
    CHECK(rec.inner_rounds == g.diameter_bound());
    CHECK(rec.states == AgentMatrix(3, 7, 0.0));
  }
}

TEST_CASE("zero outer budget gives an empty trace") {
  const Digraph g = directed_cycle(3);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const QuadraticObjective obj(column({0, 1, 2}), AgentMatrix(1, 3, 1.0));
  GradConsensusConfig cfg;
  cfg.alpha = 0.1;
  cfg.stop.max_iterations = 0;
  const RunTrace tr = run_grad_consensus(g, p, obj, cfg);
  CHECK(tr.records.empty());
  CHECK(tr.final_states == AgentMatrix(1, 3, 0.0));
  CHECK(tr.initial_states == AgentMatrix(1, 3, 0.0));
}

TEST_CASE("two-agent quadratic stays inside the strongly convex envelope") {
  const Digraph g = complete_digraph(2);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const QuadraticObjective obj(column({0, 4}), column({1, 1}));
  const double sigma = 2.0, lf = 2.0;
  const double alpha = 2.0 * 1.0 / (sigma + lf);  // alpha_hat = 1 / (sigma + L_f)
  BoundInputs in{2, alpha, Schedule::geometric(0.9), obj.constants()};
  const double rho = strongly_convex_contraction(in);
  in.schedule = Schedule::geometric(std::max(rho + 0.05, 0.9));
  const StronglyConvexRateConstants t4 = strongly_convex_rate_constants(in, 2.0);

  GradConsensusConfig cfg;
  cfg.alpha = alpha;
  cfg.schedule = in.schedule;
  cfg.stop.max_iterations = 150;
  const RunTrace tr = run_grad_consensus(g, p, obj, cfg);
  for (const auto& rec : tr.records) {
    const double env = t4.c * std::pow(in.schedule.mu, static_cast<double>(rec.k));
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(rec.states(0, i) - 2.0) <= env);
  }
}

TEST_CASE("trace bookkeeping") {
  const Digraph g = generate_erdos_renyi(6, 0.35, 22);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const QuadraticObjective obj = generate_quadratic(6, 3, QuadraticParams{.seed = 22});
  GradConsensusConfig cfg;
  cfg.alpha = 1.0 / obj.constants().lipschitz_max;
  cfg.schedule = Schedule::polynomial(0.1, 0.5);
  cfg.stop.max_iterations = 30;
  const RunTrace tr = run_grad_consensus(g, p, obj, cfg);
  CHECK(tr.algorithm == "gradconsensus");
  std::size_t prev = 0;
  for (const auto& rec : tr.records) {
    CHECK(rec.cum_grads == 6 * rec.k);
    CHECK(rec.cum_comm >= prev);
    CHECK(rec.cum_comm == prev + rec.inner_rounds);
    CHECK(rec.inner_rounds % g.diameter_bound() == 0);
    CHECK(rec.eps == eps_at(cfg.schedule, rec.k));
    prev = rec.cum_comm;
  }
  CHECK(tr.final_states == tr.records.back().states);
}

TEST_CASE("property: feasibility, inexact descent and gradient mismatch") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = 5 + seed;
    const Digraph g = generate_erdos_renyi(n, 0.3, 40 + seed);
    const ColumnStochasticMatrix p = equal_neighbor_weights(g);
    const LogisticObjective obj = logistic_oracle(generate_logistic(n, 10, 3, LogisticParams{.seed = seed}));
    GradConsensusConfig cfg;
    cfg.alpha = static_cast<double>(n) / obj.constants().lipschitz_sum;
    cfg.schedule = seed % 2 ? Schedule::polynomial(0.05, 0.5) : Schedule::constant(0.01);
    cfg.stop.max_iterations = 40;
    const RunTrace tr = run_grad_consensus(g, p, obj, cfg);
    const double l_h = obj.constants().lipschitz_max;
    const AgentMatrix* prev = &tr.initial_states;
    for (const auto& rec : tr.records) {
      CHECK(oracle::max_pairwise(rec.states) <= 2.0 * rec.eps);
      CHECK(inexact_descent_error(obj, *prev, rec.states, cfg.alpha) <= rec.eps);
      CHECK(gradient_mismatch(obj, rec.states) <= 2.0 * n * l_h * rec.eps);
      prev = &rec.states;
    }
  }
}

TEST_CASE("objective target stops early") {
  const Digraph g = generate_erdos_renyi(5, 0.4, 23);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const QuadraticObjective obj = generate_quadratic(5, 2, QuadraticParams{.seed = 23});
  const ReferenceSolution ref = reference_solution(obj);
  GradConsensusConfig cfg;
  cfg.alpha = 1.0 / obj.constants().lipschitz_max;
  cfg.schedule = Schedule::geometric(0.8);
  cfg.stop.max_iterations = 1000;
  cfg.stop.objective_target = 1e-6;
  cfg.stop.optimal_value = ref.value;
  const RunTrace tr = run_grad_consensus(g, p, obj, cfg);
  REQUIRE(!tr.records.empty());
  CHECK(tr.records.size() < 1000);
  CHECK(obj.total_value(tr.final_states.agent_mean()) - ref.value <= 1e-6);
}

TEST_CASE("large steps warn, divergent steps abort") {
  const Digraph g = directed_cycle(3);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  const QuadraticObjective obj(column({1, 2, 3}), AgentMatrix(1, 3, 1.0));
  GradConsensusConfig cfg;
  cfg.schedule = Schedule::constant(1e-3);
  cfg.stop.max_iterations = 3;
  cfg.alpha = 3.0;  // alpha_hat = 1 > 2/L_f = 2/3
  const RunTrace tr = run_grad_consensus(g, p, obj, cfg);
  CHECK_FALSE(tr.warnings.empty());

  cfg.alpha = 1e200;
  cfg.stop.max_iterations = 10;
  CHECK_THROWS_AS(run_grad_consensus(g, p, obj, cfg), RuntimeFailure);
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(run_grad_consensus(g, p, obj, cfg), std::invalid_argument);
}

}  // TEST_SUITE
