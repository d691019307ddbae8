#include "gradcons/problems.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gradcons/digest.hpp"
#include "gradcons/errors.hpp"
#include "gradcons/kernels.hpp"

namespace gradcons {

double Objective::total_value(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < agents(); ++i) sum += value(i, x);
  return sum;
}

void Objective::total_gradient(std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> g(dim());
  for (std::size_t i = 0; i < agents(); ++i) {
    gradient(i, x, g);
    kernels::axpy(1.0, g, out);
  }
}

void Objective::local_gradients(const AgentMatrix& states, AgentMatrix& out) const {
  if (states.agents() != agents() || states.dim() != dim()) throw std::invalid_argument("local_gradients: state shape does not match oracle");
  if (out.agents() != agents() || out.dim() != dim()) out = AgentMatrix(dim(), agents());
  for (std::size_t i = 0; i < agents(); ++i) gradient(i, states.agent(i), out.agent(i));
}

void Objective::finish_constants() {
  auto& c = constants_;
  c.lipschitz_sum = 0.0;
  c.lipschitz_max = 0.0;
  for (double l : c.lipschitz) {
    c.lipschitz_sum += l;
    c.lipschitz_max = std::max(c.lipschitz_max, l);
  }
  if (c.gradient_bounds) c.gradient_bound_max = *std::max_element(c.gradient_bounds->begin(), c.gradient_bounds->end());
  const std::vector<double> zero(dim(), 0.0);
  std::vector<double> g(dim());
  c.gradient_norm_at_zero = 0.0;
  for (std::size_t i = 0; i < agents(); ++i) {
    gradient(i, zero, g);
    c.gradient_norm_at_zero = std::max(c.gradient_norm_at_zero, norm2(g));
  }
}

// ---------------------------------------------------------------------------
// Logistic regression

LogisticDataset generate_logistic(std::size_t agents, std::size_t samples_per_agent, std::size_t dim,
                                  const LogisticParams& params) {
  if (agents == 0 || samples_per_agent == 0 || dim == 0) throw std::invalid_argument("generate_logistic: sizes must be positive");
  if (!(params.sigma1 > 0.0) || !(params.sigma2 > 0.0)) throw std::invalid_argument("generate_logistic: standard deviations must be positive");
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> positive(params.mu1, params.sigma1);
  std::normal_distribution<double> negative(params.mu2, params.sigma2);
  const std::size_t n_pos = (samples_per_agent + 1) / 2;

  LogisticDataset data;
  data.dim = dim;
  data.params = params;
  data.agents.resize(agents);
  for (auto& agent : data.agents) {
    agent.features.resize(samples_per_agent * dim);
    agent.labels.resize(samples_per_agent);
    for (std::size_t row = 0; row < samples_per_agent; ++row) {
      const bool pos = row < n_pos;
      agent.labels[row] = pos ? 1 : -1;
      for (std::size_t c = 0; c < dim; ++c) agent.features[row * dim + c] = pos ? positive(rng) : negative(rng);
    }
  }
  return data;
}

void write_dataset_csv(const LogisticDataset& data, std::ostream& out) {
  out << "agent_id,y";
  for (std::size_t c = 0; c < data.dim; ++c) out << ",x" << c;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < data.agents.size(); ++i) {
    const auto& agent = data.agents[i];
    for (std::size_t row = 0; row < agent.rows(); ++row) {
      out << i << ',' << agent.labels[row];
      for (std::size_t c = 0; c < data.dim; ++c) out << ',' << agent.features[row * data.dim + c];
      out << '\n';
    }
  }
  if (!out) throw RuntimeFailure("failed to write dataset CSV");
}

LogisticDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dataset CSV is empty");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 3 || line.rfind("agent_id,y", 0) != 0) throw ConfigError("dataset CSV header must start with agent_id,y and carry features");
  LogisticDataset data;
  data.dim = columns - 2;
  std::map<std::size_t, AgentSamples> by_agent;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns) throw ConfigError("dataset CSV line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " fields");
    try {
      auto& agent = by_agent[std::stoul(cells[0])];
      const int y = std::stoi(cells[1]);
      if (y != 1 && y != -1) throw ConfigError("dataset CSV line " + std::to_string(line_no) + ": label must be +1 or -1");
      agent.labels.push_back(y);
      for (std::size_t c = 0; c < data.dim; ++c) agent.features.push_back(std::stod(cells[c + 2]));
    } catch (const std::logic_error&) {
      throw ConfigError("dataset CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (by_agent.empty()) throw ConfigError("dataset CSV has no samples");
  if (by_agent.rbegin()->first + 1 != by_agent.size()) throw ConfigError("dataset CSV agent ids must be contiguous from 0");
  for (auto& [id, samples] : by_agent) data.agents.push_back(std::move(samples));
  return data;
}

namespace {

// log(1 + exp(u)) without overflow.
double softplus(double u) { return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

// 1 / (1 + exp(m))
double logistic_weight(double m) {
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

}  // namespace

LogisticObjective::LogisticObjective(LogisticDataset data) : data_(std::move(data)) {
  if (data_.agents.empty() || data_.dim == 0) throw std::invalid_argument("logistic oracle needs at least one agent and one feature");
  auto& c = constants_;
  c.lipschitz.resize(agents());
  c.gradient_bounds.emplace(agents());
  for (std::size_t i = 0; i < agents(); ++i) {
    const auto& agent = data_.agents[i];
    if (agent.rows() == 0 || agent.features.size() != agent.rows() * data_.dim) {
      throw std::invalid_argument("logistic oracle: agent " + std::to_string(i) + " has inconsistent sample data");
    }
    double sq = 0.0;
    double nrm = 0.0;
    for (std::size_t row = 0; row < agent.rows(); ++row) {
      const std::span<const double> a(agent.features.data() + row * data_.dim, data_.dim);
      const double s = kernels::dot(a, a);
      sq += s;
      nrm += std::sqrt(s);
    }
    const double rows = static_cast<double>(agent.rows());
    c.lipschitz[i] = sq / (4.0 * rows);
    (*c.gradient_bounds)[i] = nrm / rows;
  }
  c.strong_convexity = 0.0;
  finish_constants();
}

double LogisticObjective::value(std::size_t agent, std::span<const double> x) const {
  const auto& samples = data_.agents[agent];
  double sum = 0.0;
  for (std::size_t row = 0; row < samples.rows(); ++row) {
    const std::span<const double> a(samples.features.data() + row * data_.dim, data_.dim);
    const double margin = samples.labels[row] * kernels::dot(a, x);
    sum += softplus(-margin);
  }
  return sum / static_cast<double>(samples.rows());
}

void LogisticObjective::gradient(std::size_t agent, std::span<const double> x, std::span<double> out) const {
  const auto& samples = data_.agents[agent];
  std::fill(out.begin(), out.end(), 0.0);
  const double inv_rows = 1.0 / static_cast<double>(samples.rows());
  for (std::size_t row = 0; row < samples.rows(); ++row) {
    const std::span<const double> a(samples.features.data() + row * data_.dim, data_.dim);
    const double y = samples.labels[row];
    const double margin = y * kernels::dot(a, x);
    kernels::axpy(-y * logistic_weight(margin) * inv_rows, a, out);
  }
}

std::uint64_t LogisticObjective::digest() const {
  Fnv1a h;
  h.add(data_.dim);
  for (const auto& agent : data_.agents) {
    h.add(std::span<const double>(agent.features));
    h.add(std::span<const int>(agent.labels));
  }
  return h.value();
}

LogisticObjective logistic_oracle(LogisticDataset data) { return LogisticObjective(std::move(data)); }

// ---------------------------------------------------------------------------
// Diagonal quadratics

QuadraticObjective::QuadraticObjective(AgentMatrix targets, AgentMatrix curvatures)
    : targets_(std::move(targets)), curvatures_(std::move(curvatures)) {
  if (targets_.agents() == 0 || targets_.dim() == 0) throw std::invalid_argument("quadratic oracle needs at least one agent and one coordinate");
  if (targets_.agents() != curvatures_.agents() || targets_.dim() != curvatures_.dim()) {
    throw std::invalid_argument("quadratic oracle: targets and curvatures differ in shape");
  }
  for (double q : curvatures_.raw()) {
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("quadratic oracle: curvature entries must be positive and finite");
  }
  if (!targets_.all_finite()) throw std::invalid_argument("quadratic oracle: targets must be finite");

  auto& c = constants_;
  c.lipschitz.resize(agents());
  for (std::size_t i = 0; i < agents(); ++i) {
    const auto q = curvatures_.agent(i);
    c.lipschitz[i] = *std::max_element(q.begin(), q.end());
  }
  const std::vector<double> total_q = curvatures_.agent_sum();
  c.strong_convexity = *std::min_element(total_q.begin(), total_q.end());
  finish_constants();
}

double QuadraticObjective::value(std::size_t agent, std::span<const double> x) const {
  const auto a = targets_.agent(agent);
  const auto q = curvatures_.agent(agent);
  double sum = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double d = x[c] - a[c];
    sum += q[c] * d * d;
  }
  return 0.5 * sum;
}

void QuadraticObjective::gradient(std::size_t agent, std::span<const double> x, std::span<double> out) const {
  const auto a = targets_.agent(agent);
  const auto q = curvatures_.agent(agent);
  for (std::size_t c = 0; c < x.size(); ++c) out[c] = q[c] * (x[c] - a[c]);
}

std::optional<std::vector<double>> QuadraticObjective::closed_form_minimizer() const {
  std::vector<double> num(dim(), 0.0);
  std::vector<double> den(dim(), 0.0);
  for (std::size_t i = 0; i < agents(); ++i) {
    for (std::size_t c = 0; c < dim(); ++c) {
      num[c] += curvatures_(c, i) * targets_(c, i);
      den[c] += curvatures_(c, i);
    }
  }
  for (std::size_t c = 0; c < dim(); ++c) num[c] /= den[c];
  return num;
}

std::uint64_t QuadraticObjective::digest() const {
  Fnv1a h;
  h.add(dim());
  h.add(targets_.raw());
  h.add(curvatures_.raw());
  return h.value();
}

QuadraticObjective quadratic_oracle(AgentMatrix targets, AgentMatrix curvatures) {
  return QuadraticObjective(std::move(targets), std::move(curvatures));
}

QuadraticObjective generate_quadratic(std::size_t agents, std::size_t dim, const QuadraticParams& params) {
  if (agents == 0 || dim == 0) throw std::invalid_argument("generate_quadratic: sizes must be positive");
  if (!(params.curvature_min > 0.0) || !(params.curvature_max >= params.curvature_min)) {
    throw std::invalid_argument("generate_quadratic: need 0 < curvature_min <= curvature_max");
  }
  if (!(params.target_scale >= 0.0)) throw std::invalid_argument("generate_quadratic: target_scale must be non-negative");
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> target(0.0, 1.0);
  std::uniform_real_distribution<double> curvature(params.curvature_min, params.curvature_max);
  AgentMatrix a(dim, agents), q(dim, agents);
  for (std::size_t i = 0; i < agents; ++i) {
    for (std::size_t c = 0; c < dim; ++c) {
      a(c, i) = params.target_scale * target(rng);
      q(c, i) = params.curvature_min == params.curvature_max ? params.curvature_min : curvature(rng);
    }
  }
  return QuadraticObjective(std::move(a), std::move(q));
}

// ---------------------------------------------------------------------------
// Centralized reference

ReferenceSolution reference_solution(const Objective& objective, std::optional<double> tol, std::size_t max_iterations) {
  const std::size_t p = objective.dim();
  const double target = tol.value_or(1e-12 * static_cast<double>(objective.agents()));
  if (!(target > 0.0)) throw std::invalid_argument("reference_solution: tolerance must be positive");

  ReferenceSolution ref;
  std::vector<double> grad(p);
  if (auto closed = objective.closed_form_minimizer()) {
    ref.x = std::move(*closed);
    objective.total_gradient(ref.x, grad);
    ref.value = objective.total_value(ref.x);
    ref.gradient_norm = norm2(grad);
    return ref;
  }

  const double lf = objective.constants().lipschitz_sum;
  if (!(lf > 0.0)) throw std::invalid_argument("reference_solution: aggregate Lipschitz constant must be positive");
  const double safe_step = 1.0 / lf;
  constexpr double kArmijo = 1e-4;

  std::vector<double> x(p, 0.0), x_new(p), grad_new(p);
  double fx = objective.total_value(x);
  objective.total_gradient(x, grad);
  double step = safe_step;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const double gnorm2 = kernels::dot(grad, grad);
    if (std::sqrt(gnorm2) <= target) {
      ref.x = x;
      ref.value = fx;
      ref.gradient_norm = std::sqrt(gnorm2);
      ref.iterations = it;
      return ref;
    }
    double f_new = 0.0;
    for (;;) {
      for (std::size_t c = 0; c < p; ++c) x_new[c] = x[c] - step * grad[c];
      f_new = objective.total_value(x_new);
      // 1/L_f always decreases an L_f-smooth f; accept it even when the
      // Armijo test is lost in round-off near the minimizer.
      if (step <= safe_step || f_new <= fx - kArmijo * step * gnorm2) break;
      step = std::max(0.5 * step, safe_step);
    }
    objective.total_gradient(x_new, grad_new);
    double ss = 0.0, sy = 0.0;
    for (std::size_t c = 0; c < p; ++c) {
      const double s = x_new[c] - x[c];
      const double y = grad_new[c] - grad[c];
      ss += s * s;
      sy += s * y;
    }
    std::swap(x, x_new);
    std::swap(grad, grad_new);
    fx = f_new;
    step = sy > 0.0 ? std::clamp(ss / sy, safe_step, 1e6 * safe_step) : safe_step;
  }
  std::ostringstream msg;
  msg << "reference_solution: gradient norm did not reach " << target << " within " << max_iterations
      << " iterations (is the minimum attained? separable logistic data has none)";
  throw RuntimeFailure(msg.str());
}

}  // namespace gradcons
