#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kpart/rational.hpp"

namespace kpart {

enum class Mode { Edge, Vertex };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

using Edge = std::pair<int, int>;  // stored canonical, first < second

// Immutable simple undirected graph on vertices 0..n-1. Safe to share across
// threads after construction.
class Graph {
 public:
  Graph() = default;

  // Canonicalizes and validates the edge list; throws ValidationError naming
  // the offending pair on range errors, self-loops and duplicates.
  static Graph build(int n, const std::vector<Edge>& edge_list);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  int min_degree() const { return min_degree_; }
  int max_degree() const { return max_degree_; }
  bool has_edge(int u, int v) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;            // sorted lexicographically, u < v
  std::vector<std::vector<int>> adj_;  // sorted neighbor lists
  int min_degree_ = 0;
  int max_degree_ = 0;
};

// Sorted set of distinct vertex ids inside an ambient [0, n) universe.
class VertexSet {
 public:
  VertexSet() = default;

  // Sorts and validates; throws ValidationError on out-of-range or duplicate ids.
  static VertexSet of(std::vector<int> ids, int n);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int v) const;
  VertexSet complement(int n) const;

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.members_ == b.members_;
  }

 private:
  std::vector<int> members_;
};

struct SpectralReport {
  double lambda2 = 0.0;
  std::string method;  // "dense" or "iterative"
  double residual = 0.0;
};

struct KwayExpansionReport {
  double max_value = 0.0;
  Rational max_exact;
  std::vector<double> per_part;
  std::vector<Rational> per_part_exact;
};

// Edges with exactly one endpoint in s. Throws ValidationError when s is
// empty or the full vertex set.
std::vector<Edge> edge_boundary(const Graph& g, const VertexSet& s);

// Symmetric vertex boundary: outside vertices adjacent to s plus inside
// vertices adjacent to the complement.
VertexSet vertex_boundary(const Graph& g, const VertexSet& s);

Rational edge_expansion_exact(const Graph& g, const VertexSet& s);
double edge_expansion(const Graph& g, const VertexSet& s);
Rational vertex_expansion_exact(const Graph& g, const VertexSet& s);
double vertex_expansion(const Graph& g, const VertexSet& s);

Rational expansion_exact(const Graph& g, const VertexSet& s, Mode mode);
double expansion(const Graph& g, const VertexSet& s, Mode mode);

// Maximum per-part expansion over disjoint nonempty proper parts.
KwayExpansionReport kway_expansion(const Graph& g, const std::vector<VertexSet>& parts, Mode mode);

// Second-smallest eigenvalue of I - D^{-1/2} A D^{-1/2}. Dense symmetric
// eigendecomposition up to n = 2000, deflated power iteration above; residual
// target 1e-8 either way. Throws ValidationError on isolated vertices.
SpectralReport spectral_gap(const Graph& g);

// Subgraph induced on s with vertices relabeled 0..|s|-1 in member order.
Graph induced_subgraph(const Graph& g, const VertexSet& s);

namespace detail {
// Exposed for tests: iterative eigensolver used above the dense cutoff.
SpectralReport spectral_gap_iterative(const Graph& g);
}  // namespace detail

}  // namespace kpart
