// gradcons: run experiments, compare traces, inspect bounds.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "gradcons/bounds.hpp"
#include "gradcons/compare.hpp"
#include "gradcons/consensus.hpp"
#include "gradcons/errors.hpp"
#include "gradcons/experiment.hpp"
#include "gradcons/kernels.hpp"
#include "gradcons/trace_io.hpp"

using namespace gradcons;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int cmd_run(const std::string& path, bool quiet) {
  const ExperimentConfig cfg = parse_config(path);
  const ExperimentResult result = run_experiment(cfg);
  if (quiet) return 0;
  std::printf("experiment %s -> %s (kernels: %s)\n", cfg.name.c_str(), result.directory.string().c_str(),
              std::string(kernels::active().name).c_str());
  for (std::size_t r = 0; r < result.problem_hashes.size(); ++r) {
    std::printf("  repetition %zu problem_hash %s\n", r, hex64(result.problem_hashes[r]).c_str());
  }
  for (const RunOutput& run : result.runs) {
    const MetricReport& rep = run.report;
    const std::size_t last = rep.size() - 1;
    std::printf("  %-14s rep %zu  alpha %.4g  iters %zu  comm %zu  obj_res %.3e  sol_res %.3e  -> %s\n",
                algorithm_name(run.algorithm), run.repetition, run.alpha, rep.k[last], rep.cum_comm[last],
                rep.obj_residual[last], rep.sol_residual[last], run.csv.filename().string().c_str());
    for (const std::string& w : run.trace.warnings) std::printf("    warning: %s\n", w.c_str());
  }
  return 0;
}

int cmd_compare(const std::string& dir, const std::vector<double>& targets, const std::string& csv_path) {
  const CompareTable table = compare_directory(dir, targets);
  write_compare_text(table, std::cout);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw RuntimeFailure("cannot write " + csv_path);
    write_compare_csv(table, out);
  }
  return 0;
}

int cmd_consensus_demo(std::size_t n, std::size_t dim, double prob, double eps, std::uint64_t seed) {
  const Digraph g = generate_erdos_renyi(n, prob, seed);
  const ColumnStochasticMatrix p = equal_neighbor_weights(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  AgentMatrix z(dim, n);
  for (double& v : z.raw()) v = u(rng);
  const EpsConsensusResult res = run_eps_consensus(z, p, g, eps);
  std::printf("n=%zu dim=%zu edges=%zu D=%zu eps=%g\n", n, dim, g.edges().size(), g.diameter_bound(), eps);
  std::printf("rounds=%zu final_gap=%.3e\n", res.rounds_used, res.true_average_gap);
  return 0;
}

void print_comm_bounds(const BoundInputs& in, CommBoundMode mode, const char* label) {
  std::printf("  %s comm bound (worst-case lambda, delta):\n", label);
  for (std::size_t k : {1, 10, 100, 1000}) {
    const CommBound b = comm_bound(k, in, mode);
    if (b.saturated) {
      std::printf("    k=%-5zu rounds > 2^63 (log = %.4g)\n", k, b.log_rounds);
    } else {
      std::printf("    k=%-5zu rounds = %llu (log = %.4g)\n", k, static_cast<unsigned long long>(b.rounds), b.log_rounds);
    }
  }
}

int cmd_bounds(const std::string& path) {
  const ExperimentConfig cfg = parse_config(path);
  const ProblemInstance inst = build_instance(cfg, 0);
  const ObjectiveConstants& c = inst.objective->constants();
  std::printf("n=%zu D=%zu L_f=%.6g L_h=%.6g L_0=%.6g sigma=%.6g", inst.graph.size(), inst.graph.diameter_bound(),
              c.lipschitz_sum, c.lipschitz_max, c.gradient_norm_at_zero, c.strong_convexity);
  if (c.gradient_bound_max) std::printf(" h_m=%.6g", *c.gradient_bound_max);
  std::printf("\n");
  const double d0 = distance2(std::vector<double>(inst.reference.x.size(), 0.0), inst.reference.x);

  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    const AlgorithmSpec& spec = cfg.algorithms[a];
    if (spec.name != Algorithm::GradConsensus) continue;
    const BoundInputs in{inst.graph.size(), resolve_alpha(spec, *inst.objective), spec.schedule, c};
    std::printf("%s (alpha = %.6g)\n", run_label(cfg, a).c_str(), in.alpha);
    if (c.gradient_bound_max) print_comm_bounds(in, CommBoundMode::BoundedGradients, "bounded-gradient");
    print_comm_bounds(in, CommBoundMode::LipschitzOnly, "Lipschitz-only");
    if (spec.schedule.kind == Schedule::Kind::Polynomial) {
      const ConvexRateConstants t3 = convex_rate_constants(in, d0);
      std::printf("  convex rate: e=%.6g floor=%.6g beta=%.12g proof_threshold=%.6g\n", t3.e, t3.floor, t3.beta,
                  t3.proof_threshold);
      for (const std::string& w : t3.warnings) std::printf("    warning: %s\n", w.c_str());
    }
    if (spec.schedule.kind == Schedule::Kind::Geometric && c.strong_convexity > 0.0) {
      const StronglyConvexRateConstants t4 = strongly_convex_rate_constants(in, d0);
      std::printf("  strongly convex rate: rho=%.6g C=%.6g\n", t4.rho, t4.c);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed optimization with terminated consensus"};
  app.require_subcommand(1);

  std::string config_path;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run every algorithm in a config and write trace CSVs");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_flag("-q,--quiet", quiet, "no summary");

  std::string dir;
  std::string csv_path;
  std::vector<double> targets = kDefaultTargets;
  auto* compare = app.add_subcommand("compare", "tabulate cost to reach residual targets");
  compare->add_option("dir", dir, "directory of trace CSVs")->required();
  compare->add_option("--targets", targets, "solution residual targets");
  compare->add_option("--csv", csv_path, "also write the table as CSV");

  std::size_t n = 20, dim = 3;
  double prob = 0.3, eps = 1e-6;
  std::uint64_t seed = 1;
  auto* demo = app.add_subcommand("consensus-demo", "terminated average consensus on random inputs");
  demo->add_option("-n,--agents", n, "agent count")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  demo->add_option("-p,--dim", dim, "vector dimension")->check(CLI::PositiveNumber);
  demo->add_option("--prob", prob, "edge probability")->check(CLI::Range(0.0, 1.0));
  demo->add_option("--eps", eps, "tolerance")->check(CLI::PositiveNumber);
  demo->add_option("--seed", seed, "graph and data seed");

  auto* bounds = app.add_subcommand("bounds", "print communication bounds and rate constants");
  bounds->add_option("config", config_path, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, quiet);
    if (*compare) return cmd_compare(dir, targets, csv_path);
    if (*demo) return cmd_consensus_demo(n, dim, prob, eps, seed);
    if (*bounds) return cmd_bounds(config_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid setting: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
