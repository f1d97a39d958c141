#include "kpart/oracle.hpp"

#include <algorithm>
#include <chrono>

#include "kpart/errors.hpp"

namespace kpart {

namespace {

struct Enumerator {
  const Graph& g;
  Mode mode;
  int k;
  int part_size;
  std::vector<std::vector<int>> current;
  OracleResult result;

  void consider() {
    Rational worst = Rational::of(0, 1);
    for (const auto& ids : current) {
      Rational e = expansion_exact(g, VertexSet::of(ids, g.n()), mode);
      if (e > worst) worst = e;
    }
    ++result.candidates;
    if (result.argmin.empty() || worst < result.opt) {
      result.opt = worst;
      result.argmin.clear();
      for (const auto& ids : current) result.argmin.push_back(VertexSet::of(ids, g.n()));
    }
  }

  void recurse(std::vector<int> remaining) {
    if (remaining.empty()) {
      consider();
      return;
    }
    // The smallest remaining vertex anchors the next part: kills the k!
    // relabeling symmetry.
    int anchor = remaining.front();
    std::vector<int> pool(remaining.begin() + 1, remaining.end());
    int need = part_size - 1;
    std::vector<int> pick(need);
    for (int i = 0; i < need; ++i) pick[i] = i;
    while (true) {
      std::vector<int> part{anchor};
      std::vector<char> taken(pool.size(), 0);
      for (int idx : pick) {
        part.push_back(pool[idx]);
        taken[idx] = 1;
      }
      current.push_back(part);
      std::vector<int> rest;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (!taken[i]) rest.push_back(pool[i]);
      recurse(std::move(rest));
      current.pop_back();

      // next combination
      int pos = need - 1;
      while (pos >= 0 && pick[pos] == static_cast<int>(pool.size()) - need + pos) --pos;
      if (pos < 0) break;
      ++pick[pos];
      for (int i = pos + 1; i < need; ++i) pick[i] = pick[i - 1] + 1;
    }
  }
};

}  // namespace

OracleResult brute_kway_opt(const Graph& g, int k, Mode mode) {
  const int n = g.n();
  if (k < 2) throw ValidationError("k must be at least 2");
  if (n % k != 0) throw ValidationError("n must be divisible by k for balanced partitions");
  const int budget = k == 2 ? 16 : 12;
  if (n > budget)
    throw OracleBudgetError("exact enumeration limited to n <= " + std::to_string(budget) +
                            " for k = " + std::to_string(k) + ", got n = " + std::to_string(n));
  auto start = std::chrono::steady_clock::now();
  Enumerator e{g, mode, k, n / k, {}, {}};
  std::vector<int> all(n);
  for (int v = 0; v < n; ++v) all[v] = v;
  if (n > 0) e.recurse(all);
  e.result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return e.result;
}

Rational naive_expansion(const Graph& g, const VertexSet& s, Mode mode) {
  const int n = g.n();
  if (s.empty() || s.size() >= n)
    throw ValidationError("vertex set must be a nonempty proper subset");
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
  std::vector<char> in(n, 0);
  for (int v : s.members()) in[v] = 1;

  std::int64_t numerator = 0;
  if (mode == Mode::Edge) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (adj[u][v] && in[u] != in[v]) ++numerator;
  } else {
    for (int u = 0; u < n; ++u) {
      bool boundary = false;
      for (int v = 0; v < n; ++v)
        if (adj[u][v] && in[u] != in[v]) boundary = true;
      if (boundary) ++numerator;
    }
  }
  std::int64_t size = s.size();
  return Rational::of(numerator * n, size * (n - size));
}

SandwichReport sandwich_check(const Graph& g, int k, Mode mode, double sdp_objective,
                              const std::vector<VertexSet>& pipeline_partition, double tau) {
  SandwichReport rep;
  OracleResult oracle = brute_kway_opt(g, k, mode);
  rep.opt = oracle.opt;
  rep.sdp_objective = sdp_objective;
  rep.sdp_within = sdp_objective / g.n() <= rep.opt.to_double() + tau;
  auto kway = kway_expansion(g, pipeline_partition, mode);
  rep.pipeline_expansion = kway.max_value;
  rep.pipeline_at_least_opt = !(kway.max_exact < rep.opt);
  if (rep.opt.num > 0)
    rep.ratio_to_k_opt = rep.pipeline_expansion / (k * rep.opt.to_double());
  return rep;
}

}  // namespace kpart
