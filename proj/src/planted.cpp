#include "kpart/planted.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_set>

#include "kpart/errors.hpp"
#include "kpart/rng.hpp"

namespace kpart {

namespace {

// Floor of a small fp product; the nudge absorbs binary rounding of inputs
// like 1e-3 without ever granting a full extra unit.
int budget_floor(double x) { return static_cast<int>(std::floor(x + 1e-9)); }

std::uint64_t edge_key(int u, int v, int n) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v;
}

// Pairing-model d-regular graph: pick legal stub pairs uniformly, restart
// when the tail gets stuck (standard for d well below m).
Graph random_regular(int m, int d, Rng& rng) {
  for (int restart = 0; restart < 2000; ++restart) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(m) * d);
    for (int v = 0; v < m; ++v)
      for (int i = 0; i < d; ++i) stubs.push_back(v);
    std::unordered_set<std::uint64_t> used;
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    int failures = 0;
    while (stubs.size() >= 2 && failures < 1000) {
      std::size_t a = rng.below(stubs.size());
      std::size_t b = rng.below(stubs.size());
      if (a == b) continue;
      int u = stubs[a], v = stubs[b];
      if (u == v || used.count(edge_key(u, v, m))) {
        ++failures;
        continue;
      }
      failures = 0;
      used.insert(edge_key(u, v, m));
      edges.emplace_back(std::min(u, v), std::max(u, v));
      if (a < b) std::swap(a, b);
      stubs[a] = stubs.back();
      stubs.pop_back();
      stubs[b] = stubs.back();
      stubs.pop_back();
    }
    if (stubs.empty()) return Graph::build(m, edges);
  }
  throw GenerationError("pairing model failed to produce a simple " + std::to_string(d) +
                        "-regular graph on " + std::to_string(m) + " vertices");
}

void densify_to_ratio(std::vector<Edge>& edges, int m, int d, double r, Rng& rng) {
  if (r <= 1.0) return;
  const int cap = budget_floor(r * d);
  std::vector<int> deg(m, d);
  std::unordered_set<std::uint64_t> used;
  for (const auto& [u, v] : edges) used.insert(edge_key(u, v, m));
  int target = budget_floor((r - 1.0) * d * m / 4.0);
  int attempts = 100 * target + 100;
  while (target > 0 && attempts-- > 0) {
    int u = rng.index(m), v = rng.index(m);
    if (u == v || deg[u] >= cap || deg[v] >= cap) continue;
    if (used.count(edge_key(u, v, m))) continue;
    used.insert(edge_key(u, v, m));
    edges.emplace_back(std::min(u, v), std::max(u, v));
    ++deg[u];
    ++deg[v];
    --target;
  }
}

}  // namespace

AdversaryPolicy AdversaryPolicy::random_intra(int count) {
  AdversaryPolicy p;
  p.kind = Kind::RandomIntra;
  p.count = count;
  return p;
}

AdversaryPolicy AdversaryPolicy::clique_within_part(int part, int size) {
  AdversaryPolicy p;
  p.kind = Kind::CliqueWithinPart;
  p.part = part;
  p.size = size;
  return p;
}

AdversaryPolicy AdversaryPolicy::explicit_edges(std::vector<Edge> edges) {
  AdversaryPolicy p;
  p.kind = Kind::ExplicitEdges;
  p.edges = std::move(edges);
  return p;
}

std::string AdversaryPolicy::str() const {
  switch (kind) {
    case Kind::None:
      return "none";
    case Kind::RandomIntra:
      return "random_intra:" + std::to_string(count);
    case Kind::CliqueWithinPart:
      return "clique:" + std::to_string(part) + ":" + std::to_string(size);
    case Kind::ExplicitEdges:
      return "explicit:" + std::to_string(edges.size());
  }
  return "none";
}

AdversaryPolicy AdversaryPolicy::parse(const std::string& text) {
  if (text.empty() || text == "none") return none();
  auto split = [&](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      std::size_t pos = s.find(':', start);
      out.push_back(s.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  };
  auto fields = split(text);
  try {
    if (fields[0] == "random_intra" && fields.size() == 2)
      return random_intra(std::stoi(fields[1]));
    if (fields[0] == "clique" && fields.size() == 3)
      return clique_within_part(std::stoi(fields[1]), std::stoi(fields[2]));
  } catch (const std::exception&) {
  }
  throw ValidationError("unknown adversary policy '" + text + "'");
}

std::string portal_wiring_name(PortalWiring w) {
  return w == PortalWiring::Matching ? "matching" : "dense";
}

PortalWiring portal_wiring_from_name(const std::string& name) {
  if (name == "matching") return PortalWiring::Matching;
  if (name == "dense") return PortalWiring::Dense;
  throw ValidationError("unknown portal wiring '" + name + "'");
}

void PlantedParams::validate() const {
  if (k < 2) throw ValidationError("k must be at least 2");
  if (n <= 0 || n % k != 0)
    throw ValidationError("n=" + std::to_string(n) + " must be a positive multiple of k=" +
                          std::to_string(k));
  if (d < 3) throw ValidationError("base degree d must be at least 3");
  if (d >= n / k) throw ValidationError("base degree d must be below the part size n/k");
  if (r < 1.0) throw ValidationError("degree ratio r must be at least 1");
  if (eps < 0.0) throw ValidationError("eps must be nonnegative");
  if (!(lambda_min > 0.0 && lambda_min < 2.0))
    throw ValidationError("lambda_min must lie in (0, 2)");
}

int PlantedInstance::part_of(int v) const {
  for (std::size_t t = 0; t < parts.size(); ++t)
    if (parts[t].contains(v)) return static_cast<int>(t);
  return -1;
}

Graph PlantedInstance::pre_adversary_block(int t) const {
  const auto& part = parts[t];
  std::unordered_set<std::uint64_t> skip;
  for (const auto& [u, v] : adversary_edges) skip.insert(edge_key(u, v, graph.n()));
  std::vector<int> label(graph.n(), -1);
  const auto& mem = part.members();
  for (std::size_t i = 0; i < mem.size(); ++i) label[mem[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (const auto& [u, v] : graph.edges()) {
    if (label[u] < 0 || label[v] < 0) continue;
    if (skip.count(edge_key(u, v, graph.n()))) continue;
    edges.emplace_back(label[u], label[v]);
  }
  return Graph::build(part.size(), edges);
}

Graph gen_regular_expander(int m, int d, double lambda_min, double r, std::uint64_t seed) {
  if (d < 1 || d >= m) throw ValidationError("need 1 <= d < m");
  if ((static_cast<long long>(m) * d) % 2 != 0)
    throw ValidationError("m*d must be even for a d-regular graph");
  for (int attempt = 0; attempt < 50; ++attempt) {
    Rng rng(Rng::mix(seed, 7000 + attempt));
    Graph base = random_regular(m, d, rng);
    std::vector<Edge> edges = base.edges();
    densify_to_ratio(edges, m, d, r, rng);
    Graph g = Graph::build(m, edges);
    if (spectral_gap(g).lambda2 >= lambda_min - 1e-12) return g;
  }
  throw GenerationError("no graph with spectral gap >= " + std::to_string(lambda_min) +
                        " found in 50 attempts (m=" + std::to_string(m) +
                        ", d=" + std::to_string(d) + "); lambda_min is too aggressive");
}

namespace {

struct Blocks {
  std::vector<Edge> edges;  // global ids
  std::vector<VertexSet> parts;
  std::vector<double> lambdas;
};

Blocks make_blocks(const PlantedParams& params) {
  Blocks b;
  const int block = params.n / params.k;
  for (int t = 0; t < params.k; ++t) {
    Graph g = gen_regular_expander(block, params.d, params.lambda_min, params.r,
                                   Rng::mix(params.seed, 1000 + t));
    b.lambdas.push_back(spectral_gap(g).lambda2);
    const int offset = t * block;
    for (const auto& [u, v] : g.edges()) b.edges.emplace_back(u + offset, v + offset);
    std::vector<int> ids(block);
    for (int i = 0; i < block; ++i) ids[i] = offset + i;
    b.parts.push_back(VertexSet::of(ids, params.n));
  }
  return b;
}

}  // namespace

PlantedInstance gen_kpart_edge(const PlantedParams& params) {
  params.validate();
  Blocks blocks = make_blocks(params);
  const int n = params.n, k = params.k;
  std::vector<int> part_of(n);
  for (int v = 0; v < n; ++v) part_of[v] = v / (n / k);

  // phi(S_t) <= eps*r*d inverts to an incident cross-edge cap per part.
  const int cap = budget_floor(params.eps * params.r * params.d * n * (k - 1) /
                               (static_cast<double>(k) * k));
  int target = params.cross_edges >= 0 ? params.cross_edges : k * cap / 2;

  std::unordered_set<std::uint64_t> used;
  for (const auto& [u, v] : blocks.edges) used.insert(edge_key(u, v, n));
  std::vector<int> incident(k, 0);
  std::vector<Edge> cross;
  Rng rng(Rng::mix(params.seed, 2000));
  long long attempts = 200LL * target + 200;
  while (static_cast<int>(cross.size()) < target && attempts-- > 0) {
    int u = rng.index(n), v = rng.index(n);
    if (part_of[u] == part_of[v]) continue;
    if (incident[part_of[u]] >= cap || incident[part_of[v]] >= cap) continue;
    if (used.count(edge_key(u, v, n))) continue;
    used.insert(edge_key(u, v, n));
    cross.emplace_back(std::min(u, v), std::max(u, v));
    ++incident[part_of[u]];
    ++incident[part_of[v]];
  }

  PlantedInstance inst;
  inst.mode = Mode::Edge;
  inst.params = params;
  inst.parts = std::move(blocks.parts);
  inst.achieved_lambda = std::move(blocks.lambdas);
  inst.cross_edges = cross;
  std::vector<Edge> all = std::move(blocks.edges);
  all.insert(all.end(), cross.begin(), cross.end());
  inst.graph = Graph::build(n, all);

  for (int t = 0; t < k; ++t) {
    if (incident[t] > cap)
      throw GenerationError("internal: part " + std::to_string(t) + " exceeds the cross cap");
  }
  if (params.adversary.kind != AdversaryPolicy::Kind::None)
    inst = apply_monotone_adversary(inst, params.adversary, Rng::mix(params.seed, 3000));
  return inst;
}

PlantedInstance gen_kpart_vertex(const PlantedParams& params) {
  params.validate();
  Blocks blocks = make_blocks(params);
  const int n = params.n, k = params.k, block = n / k;
  std::vector<int> part_of(n);
  for (int v = 0; v < n; ++v) part_of[v] = v / block;

  const int portal_count = budget_floor(params.eps * n / k);
  Rng rng(Rng::mix(params.seed, 2000));
  std::vector<VertexSet> t_sets;
  std::vector<int> portals;  // global ids, grouped by part
  for (int t = 0; t < k; ++t) {
    std::vector<int> ids = blocks.parts[t].members();
    rng.shuffle(ids);
    ids.resize(portal_count);
    for (int v : ids) portals.push_back(v);
    t_sets.push_back(VertexSet::of(std::move(ids), n));
  }
  std::vector<char> is_portal(n, 0);
  for (int v : portals) is_portal[v] = 1;

  // phi^V(S_t) <= eps*k inverts to a boundary-vertex cap per part.
  const int bcap = budget_floor(params.eps * n * (k - 1) / k);
  std::vector<std::unordered_set<int>> boundary(k);
  std::unordered_set<std::uint64_t> used;
  for (const auto& [u, v] : blocks.edges) used.insert(edge_key(u, v, n));

  auto try_add = [&](int u, int v, std::vector<Edge>& out) {
    if (u == v || part_of[u] == part_of[v]) return false;
    if (used.count(edge_key(u, v, n))) return false;
    int a = part_of[u], b = part_of[v];
    int grow_a = (boundary[a].count(u) ? 0 : 1) + (boundary[a].count(v) ? 0 : 1);
    int grow_b = (boundary[b].count(u) ? 0 : 1) + (boundary[b].count(v) ? 0 : 1);
    if (static_cast<int>(boundary[a].size()) + grow_a > bcap) return false;
    if (static_cast<int>(boundary[b].size()) + grow_b > bcap) return false;
    used.insert(edge_key(u, v, n));
    out.emplace_back(std::min(u, v), std::max(u, v));
    boundary[a].insert(u);
    boundary[a].insert(v);
    boundary[b].insert(u);
    boundary[b].insert(v);
    return true;
  };

  std::vector<Edge> cross;
  const int max_edges = params.portal_edges >= 0 ? params.portal_edges
                                                 : static_cast<int>(portals.size());
  if (!portals.empty() && max_edges > 0) {
    if (params.portal_wiring == PortalWiring::Matching) {
      std::vector<char> matched(n, 0);
      long long attempts = 200LL * portals.size() + 200;
      while (static_cast<int>(cross.size()) < max_edges && attempts-- > 0) {
        int u = portals[rng.below(portals.size())];
        int v = portals[rng.below(portals.size())];
        if (matched[u] || matched[v]) continue;
        if (try_add(u, v, cross)) {
          matched[u] = matched[v] = 1;
        }
      }
    } else {
      for (std::size_t i = 0; i < portals.size() && static_cast<int>(cross.size()) < max_edges;
           ++i)
        for (std::size_t j = i + 1;
             j < portals.size() && static_cast<int>(cross.size()) < max_edges; ++j)
          try_add(std::min(portals[i], portals[j]), std::max(portals[i], portals[j]), cross);
    }
  }

  PlantedInstance inst;
  inst.mode = Mode::Vertex;
  inst.params = params;
  inst.parts = std::move(blocks.parts);
  inst.t_sets = std::move(t_sets);
  inst.achieved_lambda = std::move(blocks.lambdas);
  inst.cross_edges = cross;
  std::vector<Edge> all = std::move(blocks.edges);
  all.insert(all.end(), cross.begin(), cross.end());
  inst.graph = Graph::build(n, all);
  if (params.adversary.kind != AdversaryPolicy::Kind::None)
    inst = apply_monotone_adversary(inst, params.adversary, Rng::mix(params.seed, 3000));
  return inst;
}

PlantedInstance apply_monotone_adversary(const PlantedInstance& inst,
                                         const AdversaryPolicy& policy, std::uint64_t seed) {
  if (policy.kind == AdversaryPolicy::Kind::None) return inst;
  const int n = inst.graph.n();
  const int k = static_cast<int>(inst.parts.size());
  std::vector<int> part_of(n);
  for (int t = 0; t < k; ++t)
    for (int v : inst.parts[t].members()) part_of[v] = t;

  std::unordered_set<std::uint64_t> used;
  for (const auto& [u, v] : inst.graph.edges()) used.insert(edge_key(u, v, n));

  std::vector<Edge> added;
  Rng rng(seed);
  switch (policy.kind) {
    case AdversaryPolicy::Kind::RandomIntra: {
      long long attempts = 500LL * policy.count + 500;
      while (static_cast<int>(added.size()) < policy.count && attempts-- > 0) {
        int t = rng.index(k);
        const auto& mem = inst.parts[t].members();
        int u = mem[rng.below(mem.size())];
        int v = mem[rng.below(mem.size())];
        if (u == v || used.count(edge_key(u, v, n))) continue;
        used.insert(edge_key(u, v, n));
        added.emplace_back(std::min(u, v), std::max(u, v));
      }
      if (static_cast<int>(added.size()) < policy.count)
        throw GenerationError("random_intra adversary could not place " +
                              std::to_string(policy.count) + " edges");
      break;
    }
    case AdversaryPolicy::Kind::CliqueWithinPart: {
      if (policy.part < 0 || policy.part >= k)
        throw ValidationError("adversary part id out of range");
      const auto& mem = inst.parts[policy.part].members();
      if (policy.size < 2 || policy.size > static_cast<int>(mem.size()))
        throw ValidationError("adversary clique size out of range");
      // Prefer pairwise non-adjacent seeds so the clique adds size*(size-1)/2
      // fresh edges; fall back to any vertices when the part is too dense.
      std::vector<int> chosen;
      for (int round = 0; round < 2000 && static_cast<int>(chosen.size()) < policy.size;
           ++round) {
        int v = mem[rng.below(mem.size())];
        bool ok = true;
        for (int u : chosen)
          if (u == v || inst.graph.has_edge(u, v)) ok = false;
        if (ok) chosen.push_back(v);
      }
      while (static_cast<int>(chosen.size()) < policy.size) {
        int v = mem[rng.below(mem.size())];
        if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
      }
      for (std::size_t i = 0; i < chosen.size(); ++i)
        for (std::size_t j = i + 1; j < chosen.size(); ++j) {
          int u = chosen[i], v = chosen[j];
          if (used.count(edge_key(u, v, n))) continue;
          used.insert(edge_key(u, v, n));
          added.emplace_back(std::min(u, v), std::max(u, v));
        }
      break;
    }
    case AdversaryPolicy::Kind::ExplicitEdges: {
      for (const auto& [u, v] : policy.edges) {
        if (u < 0 || u >= n || v < 0 || v >= n || u == v)
          throw ValidationError("adversary edge out of range");
        if (part_of[u] != part_of[v])
          throw ValidationError("monotone adversary may only add intra-part edges, got (" +
                                std::to_string(u) + "," + std::to_string(v) + ")");
        if (used.count(edge_key(u, v, n))) continue;
        used.insert(edge_key(u, v, n));
        added.emplace_back(std::min(u, v), std::max(u, v));
      }
      break;
    }
    case AdversaryPolicy::Kind::None:
      break;
  }

  PlantedInstance out = inst;
  std::vector<Edge> all = inst.graph.edges();
  all.insert(all.end(), added.begin(), added.end());
  out.graph = Graph::build(n, all);
  out.adversary_edges.insert(out.adversary_edges.end(), added.begin(), added.end());
  out.lambda_post_adversary.clear();
  for (int t = 0; t < k; ++t)
    out.lambda_post_adversary.push_back(
        spectral_gap(induced_subgraph(out.graph, out.parts[t])).lambda2);
  return out;
}

bool InstanceValidation::all_ok() const {
  return lambda_certified && expansion_within_model && integral_within_bound &&
         portal_confinement;
}

InstanceValidation validate_instance(const PlantedInstance& inst) {
  InstanceValidation rep;
  const auto& params = inst.params;
  const int n = inst.graph.n();
  rep.per_part_lambda = inst.achieved_lambda;
  rep.min_lambda = 2.0;
  for (double l : rep.per_part_lambda) rep.min_lambda = std::min(rep.min_lambda, l);
  rep.lambda_certified = rep.min_lambda >= params.lambda_min - 1e-9;
  rep.degree_min = inst.graph.min_degree();
  rep.degree_max = inst.graph.max_degree();

  rep.max_part_expansion = 0.0;
  for (const auto& part : inst.parts) {
    double e = expansion(inst.graph, part, inst.mode);
    rep.per_part_expansion.push_back(e);
    rep.max_part_expansion = std::max(rep.max_part_expansion, e);
  }
  rep.model_bound = inst.mode == Mode::Edge ? params.eps * params.r * params.d
                                            : params.eps * params.k;
  rep.expansion_within_model = rep.max_part_expansion <= rep.model_bound + 1e-9;

  rep.premise_value = rep.min_lambda > 0.0
                          ? params.eps * params.k * params.r * params.r * params.r /
                                rep.min_lambda
                          : std::numeric_limits<double>::infinity();
  rep.premise_holds = rep.premise_value <= 1.0 / 800.0 + 1e-12;

  // Integral relaxation objective: cross-edge count (edge mode) or twice the
  // number of partition-boundary vertices (vertex mode).
  std::vector<int> part_of(n);
  for (std::size_t t = 0; t < inst.parts.size(); ++t)
    for (int v : inst.parts[t].members()) part_of[v] = static_cast<int>(t);
  long long crossings = 0;
  std::unordered_set<int> boundary_vertices;
  for (const auto& [u, v] : inst.graph.edges()) {
    if (part_of[u] != part_of[v]) {
      ++crossings;
      boundary_vertices.insert(u);
      boundary_vertices.insert(v);
    }
  }
  if (inst.mode == Mode::Edge) {
    rep.integral_objective = static_cast<double>(crossings);
    rep.integral_bound = params.eps * params.r * params.d * n;
  } else {
    rep.integral_objective = 2.0 * static_cast<double>(boundary_vertices.size());
    rep.integral_bound = 2.0 * params.eps * n;
  }
  rep.integral_within_bound = rep.integral_objective <= rep.integral_bound + 1e-9;

  rep.portal_confinement = true;
  if (inst.mode == Mode::Vertex) {
    std::vector<char> portal(n, 0);
    for (const auto& t : inst.t_sets)
      for (int v : t.members()) portal[v] = 1;
    for (const auto& [u, v] : inst.graph.edges())
      if (part_of[u] != part_of[v] && (!portal[u] || !portal[v]))
        rep.portal_confinement = false;
  }
  return rep;
}

}  // namespace kpart
