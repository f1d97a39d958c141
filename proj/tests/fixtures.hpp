#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "kpart/graph.hpp"
#include "kpart/planted.hpp"
#include "kpart/rng.hpp"
#include "kpart/sdp.hpp"

namespace fixtures {

inline kpart::Graph complete(int n) {
  std::vector<kpart::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return kpart::Graph::build(n, edges);
}

inline kpart::Graph cycle(int n) {
  std::vector<kpart::Edge> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return kpart::Graph::build(n, edges);
}

inline kpart::Graph path(int n) {
  std::vector<kpart::Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return kpart::Graph::build(n, edges);
}

// Two triangles {0,1,2} and {3,4,5} joined by the bridge (2,3).
inline kpart::Graph two_triangles_bridge() {
  return kpart::Graph::build(
      6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

inline kpart::Graph disjoint_k4s(int blocks) {
  std::vector<kpart::Edge> edges;
  for (int b = 0; b < blocks; ++b) {
    int off = 4 * b;
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v) edges.emplace_back(off + u, off + v);
  }
  return kpart::Graph::build(4 * blocks, edges);
}

// Random simple graph for differential tests; every vertex gets at least one
// incident edge so spectral and boundary code stays exercised.
inline kpart::Graph random_graph(int n, kpart::Rng& rng) {
  std::vector<kpart::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.unit() < 0.4) edges.emplace_back(u, v);
  std::vector<int> degree(n, 0);
  for (auto& [u, v] : edges) {
    ++degree[u];
    ++degree[v];
  }
  for (int v = 0; v < n; ++v)
    if (degree[v] == 0) {
      int w = (v + 1 + rng.index(n - 1)) % n;
      edges.emplace_back(std::min(v, w), std::max(v, w));
      ++degree[v];
      ++degree[w];
    }
  return kpart::Graph::build(n, edges);
}

inline kpart::VertexSet random_proper_subset(int n, kpart::Rng& rng) {
  std::vector<int> members;
  while (true) {
    members.clear();
    for (int v = 0; v < n; ++v)
      if (rng.unit() < 0.5) members.push_back(v);
    if (!members.empty() && static_cast<int>(members.size()) < n) break;
  }
  return kpart::VertexSet::of(members, n);
}

// Hand-built embedding from explicit rows; residual fields left zero.
inline kpart::EmbeddingSolution embedding_from_rows(
    const std::vector<std::vector<double>>& rows, kpart::Mode mode, int k) {
  kpart::EmbeddingSolution sol;
  sol.mode = mode;
  sol.k = k;
  sol.vectors.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) sol.vectors(i, j) = rows[i][j];
  return sol;
}

inline kpart::PlantedParams params(int n, int k, double eps, double lambda_min, int d,
                                   std::uint64_t seed) {
  kpart::PlantedParams p;
  p.n = n;
  p.k = k;
  p.eps = eps;
  p.lambda_min = lambda_min;
  p.d = d;
  p.seed = seed;
  return p;
}

}  // namespace fixtures
