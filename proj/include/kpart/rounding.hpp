#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "kpart/graph.hpp"
#include "kpart/planted.hpp"
#include "kpart/sdp.hpp"

namespace kpart {

struct BallProvenance {
  int center = -1;      // -1 marks a completion complement
  double radius = 0.0;  // squared-distance radius
};

struct PartitionResult {
  std::vector<VertexSet> sets;
  std::vector<Rational> expansions_exact;  // mode-matched, against the full graph
  std::vector<double> expansions;
  std::vector<BallProvenance> provenance;
  Mode mode = Mode::Edge;
  int requested_k = 0;
  bool completed = false;
  bool partial = false;  // fewer than k sets could be extracted
  std::string diagnostic;
};

// Vertices within squared distance `radius` of the center's vector.
VertexSet ball(const EmbeddingSolution& sol, int center, double radius);

// Greedy extraction: k rounds, each scanning every center and every candidate
// radius in [1/100, 1/50) (the distinct induced distance values plus the left
// endpoint), keeping balls that meet the size floor and avoid previously
// chosen vertices, and taking the expansion minimizer. Ties break to the
// smaller set, then the lower center id, then the smaller radius. A round
// with no candidate returns the sets found so far with partial = true.
PartitionResult round_greedy(const EmbeddingSolution& sol, const Graph& g, int k, Mode mode,
                             double size_floor = -1.0 /* n/(2k) */);

// Line embedding y_i = max{0, d(i, i0) - 1/100}, capped at the distance of
// the far region; best threshold cut with threshold <= 1/50, ties to the
// smaller side. Throws DegenerateEmbeddingError when no nontrivial threshold
// exists.
std::pair<VertexSet, double> threshold_cut_l1(const EmbeddingSolution& sol, const Graph& g,
                                              int i0, Mode mode);

// Keeps sets 1..k-1 and replaces set k with the complement of their union.
PartitionResult complete_partition(const PartitionResult& result, const Graph& g, Mode mode);

struct DiagnosticsReport {
  int k = 0;
  double eps_param = 0.0;
  double eps_effective = 0.0;  // implied by the achieved objective
  double lambda_used = 0.0;    // min pre-adversary block gap
  double bound = 0.0;          // k * max(eps_param, eps_effective) * r^3 / lambda_used

  Eigen::MatrixXd centroids;  // k x p
  std::vector<double> mean_sq_deviation;
  std::vector<double> centroid_norm_sq;
  Eigen::MatrixXd centroid_inner;
  Eigen::MatrixXd centroid_dist2;
  std::vector<double> core_diameter;  // diam of L_t = B(centroid_t, 1/400)
  std::vector<int> core_size;
  std::vector<int> core_overlap;      // |L_t intersect S_t|
  Eigen::MatrixXd core_separation;    // min squared distance between L_t, L_t'

  bool pass_deviation = false;   // (a) mean deviation within bound
  bool pass_norm = false;        // (b) centroid norms >= 1 - bound
  bool pass_inner = false;       // (c) pairwise centroid inner products <= bound
  bool pass_distance = false;    // (d) pairwise centroid distances >= 9/10
  bool pass_overlap = false;     // (e) |L_t intersect S_t| >= n/2k
  bool pass_separation = false;  // (f) d(L_t, L_t') >= 1/10
  bool all_pass() const {
    return pass_deviation && pass_norm && pass_inner && pass_distance && pass_overlap &&
           pass_separation;
  }
};

DiagnosticsReport cluster_diagnostics(const EmbeddingSolution& sol, const PlantedInstance& inst);

// Both sides of the centroid identity
// (1/N^2) sum_{i<j} ||x_i - x_j||^2 = E_i ||mu - x_i||^2.
std::pair<double, double> centroid_identity_check(const std::vector<Eigen::VectorXd>& points);

struct PoincareReport {
  double lhs = 0.0;            // sum over edges of (X_i - X_j)^2
  double rhs_ordered = 0.0;    // (1/r^2)(lambda d / n) * sum over ordered pairs
  double rhs_unordered = 0.0;  // same with the sum over unordered pairs
};

PoincareReport poincare_check(const Graph& g, const std::vector<double>& x, double lambda,
                              int d, double r);

struct OverlapStats {
  std::vector<int> best_part;  // planted part with the largest intersection
  std::vector<int> overlap;    // its size
  bool distinct_majority = false;  // parts distinct and each overlap > |W|/2
};

OverlapStats overlap_with_parts(const PartitionResult& result,
                                const std::vector<VertexSet>& parts);

}  // namespace kpart
