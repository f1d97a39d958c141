#include "kpart/graph.hpp"

#include <algorithm>
#include <set>

#include "kpart/errors.hpp"

namespace kpart {

std::string mode_name(Mode mode) { return mode == Mode::Edge ? "edge" : "vertex"; }

Mode mode_from_name(const std::string& name) {
  if (name == "edge") return Mode::Edge;
  if (name == "vertex") return Mode::Vertex;
  throw ValidationError("unknown mode '" + name + "' (expected edge or vertex)");
}

static std::string pair_str(int u, int v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

Graph Graph::build(int n, const std::vector<Edge>& edge_list) {
  if (n < 0) throw ValidationError("vertex count must be nonnegative");
  Graph g;
  g.n_ = n;
  g.adj_.assign(n, {});
  std::set<Edge> seen;
  for (const auto& [a, b] : edge_list) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw ValidationError("edge endpoint out of range: " + pair_str(a, b));
    if (a == b) throw ValidationError("self-loop rejected: " + pair_str(a, b));
    Edge e{std::min(a, b), std::max(a, b)};
    if (!seen.insert(e).second)
      throw ValidationError("duplicate edge rejected: " + pair_str(a, b));
  }
  g.edges_.assign(seen.begin(), seen.end());
  for (const auto& [u, v] : g.edges_) {
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& list : g.adj_) std::sort(list.begin(), list.end());
  g.min_degree_ = n > 0 ? n : 0;
  g.max_degree_ = 0;
  for (int v = 0; v < n; ++v) {
    int d = g.degree(v);
    g.min_degree_ = std::min(g.min_degree_, d);
    g.max_degree_ = std::max(g.max_degree_, d);
  }
  if (n == 0) g.min_degree_ = 0;
  return g;
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
  const auto& list = adj_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

VertexSet VertexSet::of(std::vector<int> ids, int n) {
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= n)
      throw ValidationError("vertex id out of range: " + std::to_string(ids[i]));
    if (i > 0 && ids[i] == ids[i - 1])
      throw ValidationError("duplicate vertex id: " + std::to_string(ids[i]));
  }
  VertexSet s;
  s.members_ = std::move(ids);
  return s;
}

bool VertexSet::contains(int v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

VertexSet VertexSet::complement(int n) const {
  std::vector<int> out;
  out.reserve(n - size());
  std::size_t idx = 0;
  for (int v = 0; v < n; ++v) {
    if (idx < members_.size() && members_[idx] == v) {
      ++idx;
    } else {
      out.push_back(v);
    }
  }
  return VertexSet::of(std::move(out), n);
}

static void require_proper(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw ValidationError("vertex set must be nonempty");
  if (s.size() >= g.n()) throw ValidationError("vertex set must be a proper subset");
}

std::vector<Edge> edge_boundary(const Graph& g, const VertexSet& s) {
  require_proper(g, s);
  std::vector<char> in(g.n(), 0);
  for (int v : s.members()) in[v] = 1;
  std::vector<Edge> out;
  for (int v : s.members())
    for (int w : g.neighbors(v))
      if (!in[w]) out.emplace_back(std::min(v, w), std::max(v, w));
  std::sort(out.begin(), out.end());
  return out;
}

VertexSet vertex_boundary(const Graph& g, const VertexSet& s) {
  require_proper(g, s);
  std::vector<char> in(g.n(), 0);
  for (int v : s.members()) in[v] = 1;
  std::vector<int> out;
  for (int v = 0; v < g.n(); ++v) {
    for (int w : g.neighbors(v)) {
      if (in[v] != in[w]) {
        out.push_back(v);
        break;
      }
    }
  }
  return VertexSet::of(std::move(out), g.n());
}

Rational edge_expansion_exact(const Graph& g, const VertexSet& s) {
  auto cut = edge_boundary(g, s);
  std::int64_t size = s.size();
  return Rational::of(static_cast<std::int64_t>(cut.size()) * g.n(), size * (g.n() - size));
}

double edge_expansion(const Graph& g, const VertexSet& s) {
  return edge_expansion_exact(g, s).to_double();
}

Rational vertex_expansion_exact(const Graph& g, const VertexSet& s) {
  auto boundary = vertex_boundary(g, s);
  std::int64_t size = s.size();
  return Rational::of(static_cast<std::int64_t>(boundary.size()) * g.n(),
                      size * (g.n() - size));
}

double vertex_expansion(const Graph& g, const VertexSet& s) {
  return vertex_expansion_exact(g, s).to_double();
}

Rational expansion_exact(const Graph& g, const VertexSet& s, Mode mode) {
  return mode == Mode::Edge ? edge_expansion_exact(g, s) : vertex_expansion_exact(g, s);
}

double expansion(const Graph& g, const VertexSet& s, Mode mode) {
  return expansion_exact(g, s, mode).to_double();
}

KwayExpansionReport kway_expansion(const Graph& g, const std::vector<VertexSet>& parts,
                                   Mode mode) {
  if (parts.empty()) throw ValidationError("no parts given");
  std::vector<char> taken(g.n(), 0);
  for (const auto& p : parts) {
    if (p.empty()) throw ValidationError("empty part");
    for (int v : p.members()) {
      if (taken[v]) throw ValidationError("parts overlap at vertex " + std::to_string(v));
      taken[v] = 1;
    }
  }
  KwayExpansionReport rep;
  rep.max_exact = Rational::of(0, 1);
  for (const auto& p : parts) {
    Rational e = expansion_exact(g, p, mode);
    rep.per_part_exact.push_back(e);
    rep.per_part.push_back(e.to_double());
    if (e > rep.max_exact) rep.max_exact = e;
  }
  rep.max_value = rep.max_exact.to_double();
  return rep;
}

Graph induced_subgraph(const Graph& g, const VertexSet& s) {
  std::vector<int> label(g.n(), -1);
  const auto& mem = s.members();
  for (std::size_t i = 0; i < mem.size(); ++i) label[mem[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges())
    if (label[u] >= 0 && label[v] >= 0) edges.emplace_back(label[u], label[v]);
  return Graph::build(s.size(), edges);
}

}  // namespace kpart
