#pragma once

#include <cstddef>

#include "gradcons/consensus.hpp"
#include "gradcons/graph.hpp"
#include "gradcons/problems.hpp"
#include "gradcons/trace.hpp"

namespace gradcons {

// Consensus tolerance sequence eps(k), k >= 1.
struct Schedule {
  enum class Kind { Constant, Polynomial, Geometric };

  Kind kind = Kind::Constant;
  double eps0 = 0.01;  // Constant, Polynomial
  double eta = 0.5;    // Polynomial, in (0, 1)
  double mu = 0.9;     // Geometric, in (0, 1)

  static Schedule constant(double eps0) { return {Kind::Constant, eps0, 0.5, 0.9}; }
  static Schedule polynomial(double eps0, double eta) { return {Kind::Polynomial, eps0, eta, 0.9}; }
  static Schedule geometric(double mu) { return {Kind::Geometric, 0.01, 0.5, mu}; }

  // Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

// Constant: eps0; Polynomial: eps0 / k^(1+eta); Geometric: mu^k.
double eps_at(const Schedule& schedule, std::size_t k);

struct GradConsensusConfig {
  double alpha = 0.0;           // local step size; the averaged iterate moves with alpha / n
  Schedule schedule;
  StopRule stop;
  std::size_t round_cap = kDefaultRoundCap;
  bool keep_states = true;      // store x^i(k) in every record
  bool time_iterations = true;  // wall_ms column; false writes 0 for reproducible files
};

// Outer loop: z^i(k) = x^i(k-1) - alpha grad f_i(x^i(k-1)), then
// x(k) = eps(k)-consensus of z(k), starting from x(0) = 0.
RunTrace run_grad_consensus(const Digraph& g, const ColumnStochasticMatrix& p, const Objective& objective,
                            const GradConsensusConfig& config);

}  // namespace gradcons
