#include "gradcons/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "gradcons/errors.hpp"
#include "gradcons/kernels.hpp"

namespace gradcons {

Digraph::Digraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), in_(n), out_(n) {
  if (n == 0) throw std::invalid_argument("digraph needs at least one node");
  for (const Edge& e : edges_) {
    if (e.receiver >= n || e.sender >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.receiver == e.sender) throw std::invalid_argument("self-loops are not allowed in a digraph");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const Edge& e : edges_) {
    in_[e.receiver].push_back(e.sender);
    out_[e.sender].push_back(e.receiver);
  }
  for (auto& list : out_) std::sort(list.begin(), list.end());
  analysis_ = analyze(*this);
  if (analysis_.diameter) diameter_bound_ = *analysis_.diameter;
}

bool Digraph::has_edge(std::size_t receiver, std::size_t sender) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{receiver, sender});
}

std::size_t Digraph::diameter_bound() const {
  if (!analysis_.strongly_connected) throw std::logic_error("diameter bound requested for a graph that is not strongly connected");
  return diameter_bound_;
}

Digraph Digraph::with_diameter_bound(std::size_t bound) const {
  if (!analysis_.strongly_connected) throw std::invalid_argument("diameter override on a graph that is not strongly connected");
  if (bound < *analysis_.diameter) {
    throw std::invalid_argument("diameter bound " + std::to_string(bound) + " is below the exact diameter " +
                                std::to_string(*analysis_.diameter));
  }
  Digraph copy = *this;
  copy.diameter_bound_ = bound;
  return copy;
}

GraphAnalysis analyze(const Digraph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n);
  std::deque<std::size_t> queue;
  std::size_t diameter = 0;
  for (std::size_t src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    dist[src] = 0;
    queue.assign(1, src);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : g.out_neighbors(u)) {
        if (dist[v] == kUnreached) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (std::size_t d : dist) {
      if (d == kUnreached) return {false, std::nullopt};
      diameter = std::max(diameter, d);
    }
  }
  return {true, diameter};
}

Digraph generate_erdos_renyi(std::size_t n, double prob, std::uint64_t seed, std::size_t max_attempts) {
  if (n < 2) throw std::invalid_argument("Erdos-Renyi digraph needs n >= 2");
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution coin(prob);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && coin(rng)) edges.push_back({i, j});
      }
    }
    Digraph g(n, std::move(edges));
    if (g.strongly_connected()) return g;
  }
  throw RuntimeFailure("could not obtain strongly connected graph after " + std::to_string(max_attempts) +
                       " attempts (n=" + std::to_string(n) + ", prob=" + std::to_string(prob) + ")");
}

Digraph directed_cycle(std::size_t n) {
  std::vector<Edge> edges;
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i) edges.push_back({(i + 1) % n, i});
  }
  return Digraph(n, std::move(edges));
}

Digraph directed_path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i + 1, i});
  return Digraph(n, std::move(edges));
}

Digraph bidirectional_path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({i + 1, i});
    edges.push_back({i, i + 1});
  }
  return Digraph(n, std::move(edges));
}

Digraph complete_digraph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) edges.push_back({i, j});
    }
  }
  return Digraph(n, std::move(edges));
}

void write_edge_list(const Digraph& g, std::ostream& out) {
  for (const Edge& e : g.edges()) out << e.receiver << ' ' << e.sender << '\n';
  if (!out) throw RuntimeFailure("failed to write edge list");
}

template <Stochasticity Kind>
StochasticMatrix<Kind>::StochasticMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), dense_(std::move(row_major)), rows_(n) {
  if (n == 0 || dense_.size() != n * n) throw std::invalid_argument("weight matrix must be n x n with n >= 1");
  std::vector<double> col_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = dense_[i * n + j];
      if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("weights must lie in [0, 1]");
      if (w > 0.0) rows_[i].emplace_back(j, w);
      row_sum += w;
      col_sum[j] += w;
    }
    if (!(dense_[i * n + i] > 0.0)) throw std::invalid_argument("diagonal weights must be strictly positive");
    if constexpr (Kind != Stochasticity::Column) {
      if (std::abs(row_sum - 1.0) > kSumTolerance) throw std::invalid_argument("row " + std::to_string(i) + " does not sum to 1");
    }
  }
  if constexpr (Kind != Stochasticity::Row) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(col_sum[j] - 1.0) > kSumTolerance) throw std::invalid_argument("column " + std::to_string(j) + " does not sum to 1");
    }
  }
}

template <Stochasticity Kind>
void StochasticMatrix<Kind>::mix(const AgentMatrix& in, AgentMatrix& out) const {
  if (in.agents() != n_ || out.agents() != n_ || in.dim() != out.dim()) throw std::invalid_argument("mix: dimension mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    auto dst = out.agent(i);
    std::fill(dst.begin(), dst.end(), 0.0);
    for (const auto& [j, w] : rows_[i]) kernels::axpy(w, in.agent(j), dst);
  }
}

template <Stochasticity Kind>
void StochasticMatrix<Kind>::mix(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("mix: dimension mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (const auto& [j, w] : rows_[i]) acc += w * in[j];
    out[i] = acc;
  }
}

template class StochasticMatrix<Stochasticity::Column>;
template class StochasticMatrix<Stochasticity::Row>;
template class StochasticMatrix<Stochasticity::Doubly>;

template <Stochasticity Kind>
bool matches_support(const StochasticMatrix<Kind>& w, const Digraph& g) {
  if (w.size() != g.size()) return false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const bool expected = (i == j) || g.has_edge(i, j);
      if ((w(i, j) > 0.0) != expected) return false;
    }
  }
  return true;
}

template bool matches_support(const ColumnStochasticMatrix&, const Digraph&);
template bool matches_support(const RowStochasticMatrix&, const Digraph&);
template bool matches_support(const DoublyStochasticMatrix&, const Digraph&);

namespace {

void require_strongly_connected(const Digraph& g, const char* what) {
  if (!g.strongly_connected()) throw std::invalid_argument(std::string(what) + " requires a strongly connected graph");
}

}  // namespace

ColumnStochasticMatrix equal_neighbor_weights(const Digraph& g) {
  require_strongly_connected(g, "equal_neighbor_weights");
  const std::size_t n = g.size();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto out = g.out_neighbors(j);
    const double share = 1.0 / static_cast<double>(out.size() + 1);
    w[j * n + j] = share;
    for (std::size_t i : out) w[i * n + j] = share;
  }
  return ColumnStochasticMatrix(n, std::move(w));
}

AuxMatrices baseline_matrices(const Digraph& g) {
  require_strongly_connected(g, "baseline_matrices");
  const std::size_t n = g.size();

  std::vector<double> row(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto in = g.in_neighbors(i);
    const double share = 1.0 / static_cast<double>(in.size() + 1);
    row[i * n + i] = share;
    for (std::size_t j : in) row[i * n + j] = share;
  }

  std::vector<std::vector<std::size_t>> undirected(n);
  for (const Edge& e : g.edges()) {
    undirected[e.receiver].push_back(e.sender);
    undirected[e.sender].push_back(e.receiver);
  }
  for (auto& nb : undirected) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  std::vector<double> metropolis(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j : undirected[i]) {
      const double w = 1.0 / (1.0 + static_cast<double>(std::max(undirected[i].size(), undirected[j].size())));
      metropolis[i * n + j] = w;
      off += w;
    }
    metropolis[i * n + i] = 1.0 - off;
  }

  return {RowStochasticMatrix(n, std::move(row)), DoublyStochasticMatrix(n, std::move(metropolis))};
}

}  // namespace gradcons
