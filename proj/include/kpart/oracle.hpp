#pragma once

#include <cstdint>
#include <vector>

#include "kpart/graph.hpp"

namespace kpart {

struct OracleResult {
  Rational opt;
  std::vector<VertexSet> argmin;
  std::uint64_t candidates = 0;
  double seconds = 0.0;
};

// Exact balanced k-way expansion by enumerating every balanced partition,
// with the part containing the smallest remaining vertex fixed first so each
// unordered partition appears once. Throws OracleBudgetError above the
// enumeration budget (n <= 16 for k = 2, n <= 12 for k >= 3).
OracleResult brute_kway_opt(const Graph& g, int k, Mode mode);

// Independent re-evaluation of the expansion formulas by double loops over an
// adjacency matrix; shares no code with the graph module.
Rational naive_expansion(const Graph& g, const VertexSet& s, Mode mode);

struct SandwichReport {
  Rational opt;
  double sdp_objective = 0.0;
  bool sdp_within = false;        // sdp_objective / n <= opt + tau
  double pipeline_expansion = 0.0;
  bool pipeline_at_least_opt = false;
  double ratio_to_k_opt = -1.0;   // pipeline / (k * opt); -1 sentinel when opt = 0
  bool ok() const { return sdp_within && pipeline_at_least_opt; }
};

SandwichReport sandwich_check(const Graph& g, int k, Mode mode, double sdp_objective,
                              const std::vector<VertexSet>& pipeline_partition,
                              double tau = 1e-3);

}  // namespace kpart
