#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gradcons {

// p x n block of per-agent vectors: column j is agent j's vector in R^p.
// Storage is agent-major so each agent's vector is contiguous.
class AgentMatrix {
 public:
  AgentMatrix() = default;
  AgentMatrix(std::size_t dim, std::size_t agents, double fill = 0.0)
      : dim_(dim), agents_(agents), data_(dim * agents, fill) {}

  std::size_t dim() const { return dim_; }
  std::size_t agents() const { return agents_; }

  std::span<double> agent(std::size_t j) { return {data_.data() + j * dim_, dim_}; }
  std::span<const double> agent(std::size_t j) const { return {data_.data() + j * dim_, dim_}; }

  double& operator()(std::size_t c, std::size_t j) { return data_[j * dim_ + c]; }
  double operator()(std::size_t c, std::size_t j) const { return data_[j * dim_ + c]; }

  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  void fill(double v) { data_.assign(data_.size(), v); }

  bool all_finite() const;

  // Column-sum over agents (a vector in R^p).
  std::vector<double> agent_sum() const;
  std::vector<double> agent_mean() const;

  friend bool operator==(const AgentMatrix&, const AgentMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::size_t agents_ = 0;
  std::vector<double> data_;
};

double norm2(std::span<const double> v);
double distance2(std::span<const double> a, std::span<const double> b);

}  // namespace gradcons
