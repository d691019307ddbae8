#include "gradcons/agent_matrix.hpp"

#include <cmath>

#include "gradcons/kernels.hpp"

namespace gradcons {

bool AgentMatrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::vector<double> AgentMatrix::agent_sum() const {
  std::vector<double> sum(dim_, 0.0);
  for (std::size_t j = 0; j < agents_; ++j) kernels::axpy(1.0, agent(j), sum);
  return sum;
}

std::vector<double> AgentMatrix::agent_mean() const {
  std::vector<double> mean = agent_sum();
  if (agents_ > 0) kernels::scale_into(1.0 / static_cast<double>(agents_), mean, mean);
  return mean;
}

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

double distance2(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(kernels::squared_distance(a, b));
}

}  // namespace gradcons
