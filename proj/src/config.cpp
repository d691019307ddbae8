#include "gradcons/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "gradcons/errors.hpp"
#include "json.hpp"

namespace gradcons {

using nlohmann::json;

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::GradConsensus: return "gradconsensus";
    case Algorithm::Dgd: return "dgd";
    case Algorithm::Extra: return "extra";
    case Algorithm::PushPull: return "pushpull";
  }
  return "?";
}

namespace {

// A JSON object plus the dotted path that led to it.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_.empty() ? "top level must be an object" : "must be an object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& item : node_.items()) {
      if (!known.count(item.key())) throw ConfigError(key_path(item.key()) + ": unknown key");
    }
  }

  bool has(const char* key) const { return node_.contains(key) && !node_.at(key).is_null(); }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key) + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const char* key) const {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  std::uint64_t unsigned_int(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(key_path(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string required_string(const char* key) const {
    if (!has(key)) throw ConfigError(key_path(key) + ": missing required key");
    return string(key, "");
  }

  Section child(const char* key) const { return Section(node_.at(key), key_path(key)); }
  const json& raw(const char* key) const { return node_.at(key); }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError((path_.empty() ? "config" : path_) + ": " + what); }

  void require(bool ok, const char* key, const std::string& what) const {
    if (!ok) throw ConfigError(key_path(key) + ": " + what);
  }

 private:
  const json& node_;
  std::string path_;
};

GraphSpec parse_graph(const Section& s) {
  s.allow_only({"n", "prob", "seed", "diameter_override"});
  GraphSpec g;
  g.n = s.unsigned_int("n", g.n);
  s.require(g.n >= 1, "n", "must be at least 1");
  g.prob = s.number("prob", g.prob);
  s.require(g.prob >= 0.0 && g.prob <= 1.0, "prob", "must lie in [0,1]");
  g.seed = s.unsigned_int("seed", g.seed);
  if (s.has("diameter_override")) {
    g.diameter_override = s.unsigned_int("diameter_override", 0);
    s.require(*g.diameter_override >= 1, "diameter_override", "must be at least 1");
  }
  return g;
}

ProblemSpec parse_problem(const Section& s) {
  s.allow_only({"kind", "dim", "seed", "samples_per_agent", "mu1", "sigma1", "mu2", "sigma2", "target_scale",
                "curvature_min", "curvature_max"});
  ProblemSpec p;
  const std::string kind = s.string("kind", "logistic");
  if (kind == "logistic") {
    p.kind = ProblemSpec::Kind::Logistic;
  } else if (kind == "quadratic") {
    p.kind = ProblemSpec::Kind::Quadratic;
  } else {
    throw ConfigError(s.key_path("kind") + ": expected \"logistic\" or \"quadratic\", got \"" + kind + "\"");
  }
  p.dim = s.unsigned_int("dim", p.dim);
  s.require(p.dim >= 1, "dim", "must be at least 1");
  p.seed = s.unsigned_int("seed", p.seed);
  p.samples_per_agent = s.unsigned_int("samples_per_agent", p.samples_per_agent);
  s.require(p.samples_per_agent >= 1, "samples_per_agent", "must be at least 1");
  p.mu1 = s.number("mu1", p.mu1);
  p.sigma1 = s.number("sigma1", p.sigma1);
  p.mu2 = s.number("mu2", p.mu2);
  p.sigma2 = s.number("sigma2", p.sigma2);
  s.require(p.sigma1 > 0.0, "sigma1", "must be positive");
  s.require(p.sigma2 > 0.0, "sigma2", "must be positive");
  p.target_scale = s.number("target_scale", p.target_scale);
  s.require(p.target_scale >= 0.0, "target_scale", "must be non-negative");
  p.curvature_min = s.number("curvature_min", p.curvature_min);
  p.curvature_max = s.number("curvature_max", p.curvature_max);
  s.require(p.curvature_min > 0.0, "curvature_min", "must be positive");
  s.require(p.curvature_max >= p.curvature_min, "curvature_max", "must be at least curvature_min");
  return p;
}

Schedule parse_schedule(const Section& s) {
  s.allow_only({"kind", "eps0", "eta", "mu"});
  Schedule sch;
  const std::string kind = s.string("kind", "constant");
  if (kind == "constant") {
    sch.kind = Schedule::Kind::Constant;
  } else if (kind == "polynomial") {
    sch.kind = Schedule::Kind::Polynomial;
  } else if (kind == "geometric") {
    sch.kind = Schedule::Kind::Geometric;
  } else {
    throw ConfigError(s.key_path("kind") + ": expected constant, polynomial or geometric, got \"" + kind + "\"");
  }
  sch.eps0 = s.number("eps0", sch.eps0);
  sch.eta = s.number("eta", sch.eta);
  sch.mu = s.number("mu", sch.mu);
  s.require(sch.eps0 > 0.0, "eps0", "eps0 must be positive");
  s.require(sch.eta > 0.0 && sch.eta < 1.0, "eta", "eta must lie in (0,1)");
  s.require(sch.mu > 0.0 && sch.mu < 1.0, "mu", "mu must lie in (0,1)");
  return sch;
}

AlgorithmSpec parse_algorithm(const Section& s) {
  s.allow_only({"name", "alpha", "schedule", "max_outer", "stop_target"});
  AlgorithmSpec a;
  const std::string name = s.required_string("name");
  if (name == "gradconsensus") {
    a.name = Algorithm::GradConsensus;
  } else if (name == "dgd") {
    a.name = Algorithm::Dgd;
  } else if (name == "extra") {
    a.name = Algorithm::Extra;
  } else if (name == "pushpull") {
    a.name = Algorithm::PushPull;
  } else {
    throw ConfigError(s.key_path("name") + ": unknown algorithm \"" + name + "\"");
  }
  a.alpha = s.optional_number("alpha");
  if (a.alpha) s.require(*a.alpha > 0.0, "alpha", "must be positive");
  if (s.has("schedule")) {
    s.require(a.name == Algorithm::GradConsensus, "schedule", "only gradconsensus takes a schedule");
    a.schedule = parse_schedule(s.child("schedule"));
  }
  a.max_outer = s.unsigned_int("max_outer", a.max_outer);
  a.stop_target = s.optional_number("stop_target");
  if (a.stop_target) s.require(*a.stop_target >= 0.0, "stop_target", "must be non-negative");
  return a;
}

OutputSpec parse_output(const Section& s) {
  s.allow_only({"directory", "write_dataset", "write_edges", "wall_time"});
  OutputSpec o;
  o.directory = s.string("directory", o.directory.string());
  s.require(!o.directory.empty(), "directory", "must not be empty");
  o.write_dataset = s.boolean("write_dataset", o.write_dataset);
  o.write_edges = s.boolean("write_edges", o.write_edges);
  o.wall_time = s.boolean("wall_time", o.wall_time);
  return o;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const Section top(root, "");
  top.allow_only({"name", "graph", "problem", "algorithms", "output", "repetitions", "seed_stride"});

  ExperimentConfig cfg;
  cfg.name = top.string("name", cfg.name);
  top.require(!cfg.name.empty() && cfg.name.find_first_of("/\\") == std::string::npos, "name",
              "must be a non-empty file-name-safe string");
  if (top.has("graph")) cfg.graph = parse_graph(top.child("graph"));
  if (top.has("problem")) cfg.problem = parse_problem(top.child("problem"));
  if (top.has("output")) cfg.output = parse_output(top.child("output"));
  cfg.repetitions = top.unsigned_int("repetitions", cfg.repetitions);
  top.require(cfg.repetitions >= 1, "repetitions", "must be at least 1");
  cfg.seed_stride = top.unsigned_int("seed_stride", cfg.seed_stride);

  if (!top.has("algorithms")) throw ConfigError("algorithms: missing required key");
  const json& list = top.raw("algorithms");
  if (!list.is_array()) throw ConfigError("algorithms: expected a list");
  if (list.empty()) throw ConfigError("algorithms: at least one algorithm is required");
  for (std::size_t i = 0; i < list.size(); ++i) {
    cfg.algorithms.push_back(parse_algorithm(Section(list[i], "algorithms[" + std::to_string(i) + "]")));
  }
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace gradcons
