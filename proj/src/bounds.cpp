#include "gradcons/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gradcons {

double zeta(double s) {
  if (!(s > 1.0)) throw std::invalid_argument("zeta: exponent must exceed 1 (the series diverges otherwise)");
  constexpr int kTerms = 32;
  const double n = kTerms;
  double sum = 0.0;
  for (int k = kTerms - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  // Euler-Maclaurin tail: integral, half endpoint, Bernoulli corrections.
  sum += std::pow(n, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(n, -s);
  static constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0,        // B2 / 2!
      -1.0 / 720.0,      // B4 / 4!
      1.0 / 30240.0,     // B6 / 6!
      -1.0 / 1209600.0,  // B8 / 8!
  };
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  for (int j = 1; j <= 4; ++j) {
    sum += kBernoulliOverFactorial[j - 1] * rising * std::pow(n, -s - 2.0 * j + 1.0);
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
  }
  return sum;
}

namespace {

// log of (-log lambda), stable when lambda = 1 - tiny.
double log_neg_log_lambda(const MixingParams& mixing, std::size_t n) {
  if (mixing.lambda) {
    const double lambda = *mixing.lambda;
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("comm_bound: lambda must lie in (0,1)");
    return std::log(-std::log(lambda));
  }
  // lambda = 1 - x with x = n^-n; -log(1 - x) = x (1 + x/2 + ...)
  const double log_x = -static_cast<double>(n) * std::log(static_cast<double>(n));
  if (log_x < -20.0) return log_x;
  return std::log(-std::log1p(-std::exp(log_x)));
}

double log_inv_delta(const MixingParams& mixing, std::size_t n) {
  if (mixing.delta) {
    if (!(*mixing.delta > 0.0)) throw std::invalid_argument("comm_bound: delta must be positive");
    return -std::log(*mixing.delta);
  }
  return static_cast<double>(n) * std::log(static_cast<double>(n));
}

// log of the state-norm bound S(k).
double log_state_bound(std::size_t k, const BoundInputs& in, CommBoundMode mode) {
  const double alpha = in.alpha;
  const double kk = static_cast<double>(k);
  if (mode == CommBoundMode::BoundedGradients) {
    if (!in.constants.gradient_bound_max) throw std::invalid_argument("comm_bound: bounded-gradient mode needs h_m");
    double sum = 0.0;
    for (std::size_t s = 1; s < k; ++s) sum += eps_at(in.schedule, s);
    return std::log(sum + alpha * kk * *in.constants.gradient_bound_max);
  }
  const double gamma = 1.0 + alpha * in.constants.lipschitz_max;
  const double log_gamma = std::log1p(alpha * in.constants.lipschitz_max);
  // gamma^k [ sum_{s<k} eps(s) gamma^-s + (1 - gamma^-k)/(gamma - 1) alpha L_0 ]
  double inner = 0.0;
  for (std::size_t s = 1; s < k; ++s) inner += eps_at(in.schedule, s) * std::exp(-static_cast<double>(s) * log_gamma);
  const double geometric = gamma > 1.0 ? -std::expm1(-kk * log_gamma) / (gamma - 1.0) : kk;
  inner += geometric * alpha * in.constants.gradient_norm_at_zero;
  return kk * log_gamma + std::log(inner);
}

}  // namespace

CommBound comm_bound(std::size_t k, const BoundInputs& in, CommBoundMode mode, const MixingParams& mixing) {
  if (k == 0) throw std::invalid_argument("comm_bound: outer iteration index starts at 1");
  if (in.agents == 0) throw std::invalid_argument("comm_bound: agent count must be positive");
  in.schedule.validate();
  const std::size_t n = in.agents;
  const double numerator = -std::log(eps_at(in.schedule, k)) + std::log(8.0 * static_cast<double>(n)) +
                           log_inv_delta(mixing, n) + log_state_bound(k, in, mode);
  const double log_den = log_neg_log_lambda(mixing, n);

  CommBound out;
  if (!(numerator > 0.0)) {
    out.log_rounds = -std::numeric_limits<double>::infinity();
    out.rounds = 1;
    return out;
  }
  out.log_rounds = std::log(numerator) - log_den;
  constexpr double kLogMax = 43.6;  // ~ log(2^63)
  if (out.log_rounds > kLogMax) {
    out.saturated = true;
    out.rounds = std::numeric_limits<std::uint64_t>::max();
    return out;
  }
  const double den = std::exp(log_den);
  const double value = den > 0.0 && std::isfinite(den) ? numerator / den : std::exp(out.log_rounds);
  out.rounds = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(value)));
  return out;
}

ConvexRateConstants convex_rate_constants(const BoundInputs& in, double initial_distance) {
  if (in.schedule.kind != Schedule::Kind::Polynomial) throw std::invalid_argument("convex_rate_constants: needs a Polynomial schedule");
  in.schedule.validate();
  const double n = static_cast<double>(in.agents);
  const double alpha = in.alpha;
  const double alpha_hat = alpha / n;
  const double lh = in.constants.lipschitz_max;
  const double lf = in.constants.lipschitz_sum;
  const double eps0 = in.schedule.eps0;

  ConvexRateConstants out;
  out.e = initial_distance + (2.0 * alpha * eps0 * lh + 1.0) * zeta(1.0 + in.schedule.eta);
  out.floor = 2.0 * out.e * std::sqrt((4.0 * alpha * n * lh * lh + lf + 2.0 / alpha_hat) / alpha_hat) * eps0;
  out.beta = 1.0 - (alpha / (4.0 * out.e)) * lh * eps0;
  out.proof_threshold = 2.0 * n * out.e * eps0 * lh;
  if (alpha_hat > 2.0 / lf) {
    std::ostringstream msg;
    msg << "alpha/n = " << alpha_hat << " exceeds 2/L_f = " << 2.0 / lf;
    out.warnings.push_back(msg.str());
  }
  if (!(out.beta > 0.0 && out.beta < 1.0)) {
    std::ostringstream msg;
    msg << "beta = " << out.beta << " lies outside (0,1); the rate claim is vacuous";
    out.warnings.push_back(msg.str());
  }
  return out;
}

double strongly_convex_contraction(const BoundInputs& in) {
  const double sigma = in.constants.strong_convexity;
  const double lf = in.constants.lipschitz_sum;
  if (!(sigma > 0.0)) throw std::invalid_argument("strongly convex rate needs sigma > 0");
  const double alpha_hat = in.alpha / static_cast<double>(in.agents);
  if (!(alpha_hat > 0.0) || alpha_hat > 2.0 / (sigma + lf)) {
    throw std::invalid_argument("strongly convex rate needs 0 < alpha/n <= 2/(sigma + L_f)");
  }
  const double inside = 1.0 - 2.0 * alpha_hat * sigma * lf / (sigma + lf);
  return std::sqrt(std::max(inside, 0.0));
}

StronglyConvexRateConstants strongly_convex_rate_constants(const BoundInputs& in, double initial_distance) {
  if (in.schedule.kind != Schedule::Kind::Geometric) throw std::invalid_argument("strongly_convex_rate_constants: needs a Geometric schedule");
  in.schedule.validate();
  StronglyConvexRateConstants out;
  out.rho = strongly_convex_contraction(in);
  const double mu = in.schedule.mu;
  if (!(mu > out.rho)) {
    std::ostringstream msg;
    msg << "strongly_convex_rate_constants: mu = " << mu << " must exceed rho = " << out.rho << " for a finite constant";
    throw std::invalid_argument(msg.str());
  }
  out.c = initial_distance + (2.0 * in.alpha * in.constants.lipschitz_max + 1.0) * mu / (mu - out.rho) + 1.0;
  return out;
}

}  // namespace gradcons
