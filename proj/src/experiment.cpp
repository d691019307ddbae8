#include "gradcons/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "gradcons/baselines.hpp"
#include "gradcons/digest.hpp"
#include "gradcons/errors.hpp"
#include "gradcons/gradconsensus.hpp"
#include "gradcons/trace_io.hpp"

namespace gradcons {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

Digraph make_graph(const GraphSpec& spec, std::uint64_t seed) {
  Digraph g = generate_erdos_renyi(spec.n, spec.prob, seed);
  if (spec.diameter_override) {
    if (*spec.diameter_override < g.diameter_bound()) {
      throw ConfigError("graph.diameter_override: " + std::to_string(*spec.diameter_override) +
                        " is below the graph diameter " + std::to_string(g.diameter_bound()));
    }
    g = g.with_diameter_bound(*spec.diameter_override);
  }
  return g;
}

std::uint64_t instance_hash(const Objective& objective, const Digraph& g) {
  Fnv1a h;
  h.add(objective.digest());
  h.add(g.size());
  h.add(g.diameter_bound());
  for (const Edge& e : g.edges()) {
    h.add(e.receiver);
    h.add(e.sender);
  }
  return h.value();
}

}  // namespace

std::string run_label(const ExperimentConfig& cfg, std::size_t index) {
  const Algorithm name = cfg.algorithms.at(index).name;
  std::size_t same = 0;
  for (const AlgorithmSpec& a : cfg.algorithms) same += a.name == name;
  std::string label = algorithm_name(name);
  if (same > 1) label += std::to_string(index);
  return label;
}

ProblemInstance build_instance(const ExperimentConfig& cfg, std::size_t repetition) {
  const std::uint64_t offset = static_cast<std::uint64_t>(repetition) * cfg.seed_stride;
  const std::uint64_t graph_seed = cfg.graph.seed + offset;
  const std::uint64_t problem_seed = cfg.problem.seed + offset;
  Digraph g = make_graph(cfg.graph, graph_seed);
  ColumnStochasticMatrix p = equal_neighbor_weights(g);
  AuxMatrices aux = baseline_matrices(g);
  ProblemInstance inst{repetition, graph_seed, problem_seed, std::move(g), std::move(p), std::move(aux), nullptr,
                       std::nullopt, {}, 0};

  const ProblemSpec& ps = cfg.problem;
  if (ps.kind == ProblemSpec::Kind::Logistic) {
    LogisticParams lp{ps.mu1, ps.sigma1, ps.mu2, ps.sigma2, problem_seed};
    inst.dataset = generate_logistic(cfg.graph.n, ps.samples_per_agent, ps.dim, lp);
    inst.objective = std::make_unique<LogisticObjective>(*inst.dataset);
  } else {
    QuadraticParams qp{ps.target_scale, ps.curvature_min, ps.curvature_max, problem_seed};
    inst.objective = std::make_unique<QuadraticObjective>(generate_quadratic(cfg.graph.n, ps.dim, qp));
  }
  const ReferenceSolution ref = reference_solution(*inst.objective);
  inst.reference = {ref.x, ref.value};
  inst.hash = instance_hash(*inst.objective, inst.graph);
  return inst;
}

double resolve_alpha(const AlgorithmSpec& spec, const Objective& objective) {
  if (spec.alpha) return *spec.alpha;
  return static_cast<double>(objective.agents()) / objective.constants().lipschitz_sum;
}

RunTrace run_algorithm(const AlgorithmSpec& spec, const ProblemInstance& inst, bool time_iterations) {
  const Objective& obj = *inst.objective;
  StopRule stop;
  stop.max_iterations = spec.max_outer;
  if (spec.stop_target) {
    stop.objective_target = spec.stop_target;
    stop.optimal_value = inst.reference.value;
  }
  const double alpha = resolve_alpha(spec, obj);
  if (spec.name == Algorithm::GradConsensus) {
    GradConsensusConfig gc;
    gc.alpha = alpha;
    gc.schedule = spec.schedule;
    gc.stop = stop;
    gc.time_iterations = time_iterations;
    return run_grad_consensus(inst.graph, inst.push_sum, obj, gc);
  }
  BaselineConfig bc;
  bc.alpha = alpha;
  bc.stop = stop;
  bc.time_iterations = time_iterations;
  switch (spec.name) {
    case Algorithm::Dgd: return run_dgd(inst.aux.doubly_stochastic, obj, bc);
    case Algorithm::Extra: return run_extra(inst.aux.doubly_stochastic, obj, bc);
    case Algorithm::PushPull: return run_pushpull(inst.aux.row_stochastic, inst.push_sum, obj, bc);
    case Algorithm::GradConsensus: break;
  }
  throw std::logic_error("unreachable algorithm");
}

std::filesystem::path output_directory(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("GRADCONS_OUTPUT_DIR"); env && *env) return env;
  return cfg.output.directory;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files) {
  ExperimentResult result;
  result.directory = output_directory(cfg);
  if (write_files) {
    std::error_code ec;
    std::filesystem::create_directories(result.directory, ec);
    if (ec) throw RuntimeFailure("cannot create output directory " + result.directory.string() + ": " + ec.message());
  }

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    const ProblemInstance inst = build_instance(cfg, rep);
    result.problem_hashes.push_back(inst.hash);
    const std::string stem = cfg.name + "_";
    const std::string suffix = "_rep" + std::to_string(rep);

    if (write_files && cfg.output.write_dataset && inst.dataset) {
      std::ofstream out(result.directory / (stem + "dataset" + suffix + ".csv"));
      write_dataset_csv(*inst.dataset, out);
      if (!out) throw RuntimeFailure("failed to write dataset for repetition " + std::to_string(rep));
    }
    if (write_files && cfg.output.write_edges) {
      std::ofstream out(result.directory / (stem + "edges" + suffix + ".txt"));
      write_edge_list(inst.graph, out);
      if (!out) throw RuntimeFailure("failed to write edge list for repetition " + std::to_string(rep));
    }

    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
      const AlgorithmSpec& spec = cfg.algorithms[a];
      RunOutput run;
      run.algorithm = spec.name;
      run.repetition = rep;
      run.alpha = resolve_alpha(spec, *inst.objective);
      try {
        run.trace = run_algorithm(spec, inst, cfg.output.wall_time);
      } catch (const RuntimeFailure& e) {
        throw RuntimeFailure(std::string(algorithm_name(spec.name)) + ", repetition " + std::to_string(rep) + ": " +
                             e.what());
      }
      run.report = residuals(run.trace, inst.reference, *inst.objective);

      if (write_files) {
        TraceMetadata meta{
            {"experiment", cfg.name},
            {"algorithm", run_label(cfg, a)},
            {"repetition", std::to_string(rep)},
            {"graph_seed", std::to_string(inst.graph_seed)},
            {"problem_seed", std::to_string(inst.problem_seed)},
            {"problem_hash", hex64(inst.hash)},
            {"alpha", format_double(run.alpha)},
            {"violation_normalized", run.report.violation_normalized ? "true" : "false"},
        };
        run.csv = result.directory / (stem + run_label(cfg, a) + suffix + ".csv");
        write_trace_csv(run.trace, run.report, run.csv, meta);
      }
      result.runs.push_back(std::move(run));
    }
  }
  return result;
}

}  // namespace gradcons
