#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gradcons/agent_matrix.hpp"

namespace gradcons {

// Directed edge (receiver, sender): `sender` transmits to `receiver`.
struct Edge {
  std::size_t receiver;
  std::size_t sender;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct GraphAnalysis {
  bool strongly_connected = false;
  std::optional<std::size_t> diameter;  // set only when strongly connected
};

// Communication topology. Pure structure: no self-loops, no weights.
// The diameter bound D defaults to the exact diameter when the graph is
// strongly connected and may be raised with with_diameter_bound().
class Digraph {
 public:
  Digraph(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const std::size_t> in_neighbors(std::size_t i) const { return in_[i]; }
  std::span<const std::size_t> out_neighbors(std::size_t j) const { return out_[j]; }
  bool has_edge(std::size_t receiver, std::size_t sender) const;

  bool strongly_connected() const { return analysis_.strongly_connected; }
  std::optional<std::size_t> diameter() const { return analysis_.diameter; }

  // Throws std::logic_error if the graph is not strongly connected.
  std::size_t diameter_bound() const;

  // Copy with a larger D; rejects bounds below the exact diameter.
  Digraph with_diameter_bound(std::size_t bound) const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> out_;
  GraphAnalysis analysis_;
  std::size_t diameter_bound_ = 0;
};

// All-pairs BFS.
GraphAnalysis analyze(const Digraph& g);

// Each ordered pair (i, j), i != j, is an edge independently with probability
// `prob`. Disconnected draws are regenerated from a sub-seed derived from
// (seed, attempt) until strongly connected or `max_attempts` is spent.
Digraph generate_erdos_renyi(std::size_t n, double prob, std::uint64_t seed,
                             std::size_t max_attempts = 1000);

// Small fixed topologies.
Digraph directed_cycle(std::size_t n);       // i -> i+1 mod n
Digraph directed_path(std::size_t n);        // i -> i+1, not strongly connected
Digraph bidirectional_path(std::size_t n);   // i <-> i+1
Digraph complete_digraph(std::size_t n);

// Edge-list export: one "receiver sender" pair per line, 0-based.
void write_edge_list(const Digraph& g, std::ostream& out);

enum class Stochasticity { Column, Row, Doubly };

// Dense nonnegative n x n weight matrix with a cached sparse row view used by
// mix(). Construction validates the stochasticity kind within 1e-12 and
// strictly positive diagonal entries.
template <Stochasticity Kind>
class StochasticMatrix {
 public:
  static constexpr double kSumTolerance = 1e-12;

  StochasticMatrix(std::size_t n, std::vector<double> row_major);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return dense_[i * n_ + j]; }
  std::span<const std::pair<std::size_t, double>> row(std::size_t i) const { return rows_[i]; }
  const std::vector<double>& dense() const { return dense_; }

  // out^i = sum_j w_ij in^j. `out` must not alias `in`.
  void mix(const AgentMatrix& in, AgentMatrix& out) const;
  void mix(std::span<const double> in, std::span<double> out) const;

 private:
  std::size_t n_;
  std::vector<double> dense_;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
};

using ColumnStochasticMatrix = StochasticMatrix<Stochasticity::Column>;
using RowStochasticMatrix = StochasticMatrix<Stochasticity::Row>;
using DoublyStochasticMatrix = StochasticMatrix<Stochasticity::Doubly>;

extern template class StochasticMatrix<Stochasticity::Column>;
extern template class StochasticMatrix<Stochasticity::Row>;
extern template class StochasticMatrix<Stochasticity::Doubly>;

// w_ij > 0 exactly on the diagonal and on edges (i, j).
template <Stochasticity Kind>
bool matches_support(const StochasticMatrix<Kind>& w, const Digraph& g);

// Column j puts 1/(|N_j^out| + 1) on j and on each out-neighbor of j.
ColumnStochasticMatrix equal_neighbor_weights(const Digraph& g);

struct AuxMatrices {
  RowStochasticMatrix row_stochastic;        // equal in-neighbor weights
  DoublyStochasticMatrix doubly_stochastic;  // Metropolis on the symmetrized graph
};

AuxMatrices baseline_matrices(const Digraph& g);

}  // namespace gradcons
