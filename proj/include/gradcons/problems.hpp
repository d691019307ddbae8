#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gradcons/agent_matrix.hpp"

namespace gradcons {

// Smoothness and curvature constants of f = sum_i f_i.
struct ObjectiveConstants {
  std::vector<double> lipschitz;                      // L_i, per agent
  double lipschitz_sum = 0.0;                         // L_f = sum L_i
  double lipschitz_max = 0.0;                         // L_h = max L_i
  std::optional<std::vector<double>> gradient_bounds; // h_i, when globally bounded
  std::optional<double> gradient_bound_max;           // h_m
  double gradient_norm_at_zero = 0.0;                 // L_0 = max ||grad f_i(0)||
  double strong_convexity = 0.0;                      // sigma, 0 when merely convex
};

// Per-agent value/gradient oracle. Immutable after construction.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t agents() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double value(std::size_t agent, std::span<const double> x) const = 0;
  virtual void gradient(std::size_t agent, std::span<const double> x, std::span<double> out) const = 0;

  // Exact minimizer of the aggregate, when one is available in closed form.
  virtual std::optional<std::vector<double>> closed_form_minimizer() const { return std::nullopt; }

  // Fingerprint of the problem data.
  virtual std::uint64_t digest() const = 0;

  const ObjectiveConstants& constants() const { return constants_; }

  double total_value(std::span<const double> x) const;
  void total_gradient(std::span<const double> x, std::span<double> out) const;

  // out^i = grad f_i(states^i)
  void local_gradients(const AgentMatrix& states, AgentMatrix& out) const;

 protected:
  // Fills L_f, L_h, h_m and L_0 from the per-agent fields already set.
  void finish_constants();

  ObjectiveConstants constants_;
};

struct LogisticParams {
  double mu1 = 0.3;
  double sigma1 = 1.0;
  double mu2 = -0.3;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
};

struct AgentSamples {
  std::vector<double> features;  // rows x dim, row-major
  std::vector<int> labels;       // +1 / -1
  std::size_t rows() const { return labels.size(); }
};

struct LogisticDataset {
  std::size_t dim = 0;
  std::vector<AgentSamples> agents;
  LogisticParams params;
};

// ceil(n_i/2) samples per agent ~ N(mu1, sigma1^2) per coordinate with y = +1,
// the rest ~ N(mu2, sigma2^2) with y = -1.
LogisticDataset generate_logistic(std::size_t agents, std::size_t samples_per_agent, std::size_t dim,
                                  const LogisticParams& params);

// CSV rows: agent_id,y,x0,...,x{p-1}
void write_dataset_csv(const LogisticDataset& data, std::ostream& out);
LogisticDataset read_dataset_csv(std::istream& in);

// f_i(x) = (1/n_i) sum_j log(1 + exp(-y_ij <A_ij, x>))
class LogisticObjective final : public Objective {
 public:
  explicit LogisticObjective(LogisticDataset data);

  std::size_t agents() const override { return data_.agents.size(); }
  std::size_t dim() const override { return data_.dim; }
  double value(std::size_t agent, std::span<const double> x) const override;
  void gradient(std::size_t agent, std::span<const double> x, std::span<double> out) const override;
  std::uint64_t digest() const override;

  const LogisticDataset& data() const { return data_; }

 private:
  LogisticDataset data_;
};

LogisticObjective logistic_oracle(LogisticDataset data);

// f_i(x) = 1/2 (x - a_i)^T diag(q_i) (x - a_i)
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(AgentMatrix targets, AgentMatrix curvatures);

  std::size_t agents() const override { return targets_.agents(); }
  std::size_t dim() const override { return targets_.dim(); }
  double value(std::size_t agent, std::span<const double> x) const override;
  void gradient(std::size_t agent, std::span<const double> x, std::span<double> out) const override;
  std::optional<std::vector<double>> closed_form_minimizer() const override;
  std::uint64_t digest() const override;

  const AgentMatrix& targets() const { return targets_; }
  const AgentMatrix& curvatures() const { return curvatures_; }

 private:
  AgentMatrix targets_;
  AgentMatrix curvatures_;
};

QuadraticObjective quadratic_oracle(AgentMatrix targets, AgentMatrix curvatures);

struct QuadraticParams {
  double target_scale = 1.0;    // a_i ~ N(0, scale^2) per coordinate
  double curvature_min = 0.5;   // q_i ~ U[min, max] per coordinate
  double curvature_max = 2.0;
  std::uint64_t seed = 0;
};

QuadraticObjective generate_quadratic(std::size_t agents, std::size_t dim, const QuadraticParams& params);

struct ReferenceSolution {
  std::vector<double> x;
  double value = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
};

// Centralized minimizer of f. Uses the closed form when the oracle has one,
// otherwise gradient descent with Armijo backtracking (Barzilai-Borwein trial
// steps) until ||grad f|| <= tol. Default tol is 1e-12 * n.
ReferenceSolution reference_solution(const Objective& objective, std::optional<double> tol = std::nullopt,
                                     std::size_t max_iterations = 1'000'000);

}  // namespace gradcons
