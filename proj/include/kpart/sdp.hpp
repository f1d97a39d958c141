#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "kpart/graph.hpp"
#include "kpart/planted.hpp"

namespace kpart {

// Symbolic description of the relaxation: unit diagonal, entrywise
// nonnegativity, row sums n/k, squared-distance triangle inequalities, and
// the mode's objective. Triangles are never materialized here.
struct RelaxationSpec {
  Graph graph;
  int k = 2;
  Mode mode = Mode::Edge;

  long long diagonal_constraints() const { return graph.n(); }
  long long nonneg_constraints() const {
    long long n = graph.n();
    return n * (n - 1) / 2;
  }
  long long rowsum_constraints() const { return graph.n(); }
  long long triangle_constraints() const {
    long long n = graph.n();
    return n * (n - 1) * (n - 2) / 2;
  }
  long long eta_constraints() const {
    return mode == Mode::Vertex ? 2LL * graph.m() : 0;
  }
  double row_target() const { return static_cast<double>(graph.n()) / k; }
  std::string objective_description() const;
};

RelaxationSpec build_relaxation(const Graph& g, int k, Mode mode);

struct SolverConfig {
  int rank = 0;  // 0 = max(k+2, ceil(sqrt(2n)))
  double tau_feas = 1e-4;
  int max_outer = 60;
  int max_inner = 500;
  double penalty_growth = 3.0;
  int triangle_budget = 2000;
  std::uint64_t seed = 0;
};

struct ResidualReport {
  double diagonal = 0.0;
  double nonneg = 0.0;
  double rowsum = 0.0;  // reported relative to n: max_i |sum_j U_ij - n/k| / n
  double triangle = 0.0;
  double eta = 0.0;  // vertex mode consistency of stored eta with the vectors
  long long triangles_checked = 0;
  bool triangle_exact = true;

  double worst() const;
  bool within(double tau) const { return worst() <= tau; }
};

struct SolverTrace {
  int outer_iters = 0;
  long long inner_iters = 0;
  int active_triangles = 0;
  bool converged = false;
};

struct EmbeddingSolution {
  Eigen::MatrixXd vectors;  // n x p, one unit row per vertex
  Mode mode = Mode::Edge;
  int k = 2;
  double objective = 0.0;
  std::vector<double> eta;  // vertex mode: max neighbor squared distance
  ResidualReport residuals;
  SolverTrace trace;

  int n() const { return static_cast<int>(vectors.rows()); }
  int p() const { return static_cast<int>(vectors.cols()); }
  double dot(int i, int j) const { return vectors.row(i).dot(vectors.row(j)); }
  double dist2(int i, int j) const { return (vectors.row(i) - vectors.row(j)).squaredNorm(); }
};

// The exactly feasible solution that assigns each vertex its part's basis
// vector. Objective: cross-edge count (edge mode), twice the boundary-vertex
// count (vertex mode).
EmbeddingSolution integral_embedding(const PlantedInstance& inst);

// Low-rank solve: rows on the unit sphere, augmented Lagrangian on the
// row-sum equalities, hinge penalties on nonnegativity and on lazily
// separated triangles. Throws InfeasibleError when k > n; non-convergence
// within the budget returns the best iterate with trace.converged = false.
EmbeddingSolution solve(const RelaxationSpec& spec, const SolverConfig& cfg);
EmbeddingSolution solve(const RelaxationSpec& spec, const SolverConfig& cfg,
                        const Eigen::MatrixXd& warm_start);

struct TriangleViolation {
  int i = 0, j = 0, k = 0;
  double violation = 0.0;  // d(i,k) - d(i,j) - d(k,j), positive = violated
};

// Up to `budget` worst violated triples; empty when nothing exceeds tol.
// Full cubic scan for n <= 120, otherwise sampled pairs tested against the
// 20 nearest neighbors of each endpoint.
std::vector<TriangleViolation> separate_triangles(const EmbeddingSolution& sol, int budget,
                                                  double tol = 1e-4, std::uint64_t seed = 0);

// Max violation per constraint family. Triangles: exact scan for n <= 400,
// 1e6 sampled triples above.
ResidualReport check_feasibility(const EmbeddingSolution& sol, const RelaxationSpec& spec);

double objective_value(const RelaxationSpec& spec, const Eigen::MatrixXd& y);

namespace detail {

// Smooth penalized model minimized by the inner loop; exposed so tests can
// compare the analytic gradient against central finite differences.
struct PenaltyModel {
  const RelaxationSpec* spec = nullptr;
  double row_target = 0.0;
  Eigen::VectorXd multipliers;  // one per row-sum equality
  double rho_eq = 0.0;
  double rho_neg = 0.0;
  double rho_tri = 0.0;
  std::vector<std::array<int, 3>> triangles;  // (i, j, k) active hinges

  double value(const Eigen::MatrixXd& y) const;
  double value_and_grad(const Eigen::MatrixXd& y, Eigen::MatrixXd& grad) const;
};

}  // namespace detail

}  // namespace kpart
