#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gradcons/gradconsensus.hpp"
#include "gradcons/problems.hpp"

namespace gradcons {

// Riemann zeta for s > 1 (Euler-Maclaurin summation, absolute error < 1e-12).
double zeta(double s);

enum class CommBoundMode {
  BoundedGradients,  // needs h_m; S = sum_{s<k} eps(s) + alpha k h_m
  LipschitzOnly,     // S = gamma^k sum_{s<k} eps(s)/gamma^s + (gamma^k - 1)/(gamma - 1) alpha L_0
};

// Graph mixing parameters. Unset values fall back to the worst case
// lambda = 1 - n^-n and delta = n^-n, handled in log space.
struct MixingParams {
  std::optional<double> lambda;
  std::optional<double> delta;
};

struct CommBound {
  double log_rounds = 0.0;   // natural log of the unrounded bound
  std::uint64_t rounds = 1;  // ceil(bound), at least 1; UINT64_MAX when saturated
  bool saturated = false;
};

struct BoundInputs {
  std::size_t agents = 0;
  double alpha = 0.0;
  Schedule schedule;
  ObjectiveConstants constants;
};

// Worst-case inner consensus rounds at outer iteration k >= 1. The sum of
// previous tolerances runs over s = 1..k-1 (empty at k = 1).
CommBound comm_bound(std::size_t k, const BoundInputs& in, CommBoundMode mode, const MixingParams& mixing = {});

struct ConvexRateConstants {
  double e = 0.0;                // ||x_hat(0) - x*|| + (2 alpha eps0 L_h + 1) zeta(1 + eta)
  double floor = 0.0;            // residual level above which Q-linear descent holds
  double beta = 0.0;             // 1 - alpha L_h eps0 / (4 e)
  double proof_threshold = 0.0;  // 2 n e eps0 L_h, the intermediate threshold used in the argument
  std::vector<std::string> warnings;
};

// Requires a Polynomial schedule.
ConvexRateConstants convex_rate_constants(const BoundInputs& in, double initial_distance);

struct StronglyConvexRateConstants {
  double rho = 0.0;  // sqrt(1 - 2 alpha_hat sigma L_f / (sigma + L_f))
  double c = 0.0;    // ||x_hat(0) - x*|| + (2 alpha L_h + 1) mu / (mu - rho) + 1
};

// rho alone; requires sigma > 0 and alpha/n <= 2/(sigma + L_f).
double strongly_convex_contraction(const BoundInputs& in);

// Requires a Geometric schedule with mu > rho.
StronglyConvexRateConstants strongly_convex_rate_constants(const BoundInputs& in, double initial_distance);

}  // namespace gradcons
