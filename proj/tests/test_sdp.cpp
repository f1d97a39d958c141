#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "kpart/errors.hpp"
#include "kpart/sdp.hpp"

using namespace kpart;

namespace {

PlantedInstance blocks_instance(int blocks) {
  PlantedInstance inst = gen_kpart_edge(fixtures::params(4 * blocks, blocks, 0.0, 1.0, 3, 7));
  return inst;
}

PlantedInstance bridge_instance(Mode mode) {
  // two triangles plus a bridge presented as a (hand-made) planted instance
  PlantedInstance inst;
  inst.mode = mode;
  inst.graph = fixtures::two_triangles_bridge();
  inst.parts = {VertexSet::of({0, 1, 2}, 6), VertexSet::of({3, 4, 5}, 6)};
  inst.t_sets = {VertexSet::of({2}, 6), VertexSet::of({3}, 6)};
  inst.params = fixtures::params(6, 2, 0.5, 0.1, 3, 0);
  inst.achieved_lambda = {1.5, 1.5};
  inst.cross_edges = {{2, 3}};
  return inst;
}

}  // namespace

TEST_CASE("build_relaxation inventory") {
  RelaxationSpec k2 = build_relaxation(fixtures::complete(2), 2, Mode::Edge);
  CHECK(k2.diagonal_constraints() == 2);
  CHECK(k2.nonneg_constraints() == 1);
  CHECK(k2.rowsum_constraints() == 2);
  CHECK(k2.triangle_constraints() == 0);
  CHECK(k2.row_target() == doctest::Approx(1.0));

  RelaxationSpec blocks = build_relaxation(fixtures::disjoint_k4s(3), 3, Mode::Vertex);
  CHECK(blocks.rowsum_constraints() == 12);
  CHECK(blocks.eta_constraints() == 2 * 18);
  CHECK_THROWS_AS(build_relaxation(fixtures::complete(2), 1, Mode::Edge), ValidationError);
}

TEST_CASE("integral embedding objectives and exact feasibility") {
  EmbeddingSolution blocks = integral_embedding(blocks_instance(3));
  CHECK(blocks.objective == 0.0);
  CHECK(blocks.residuals.worst() == 0.0);

  EmbeddingSolution edge = integral_embedding(bridge_instance(Mode::Edge));
  CHECK(edge.objective == 1.0);
  CHECK(edge.residuals.worst() == 0.0);

  EmbeddingSolution vertex = integral_embedding(bridge_instance(Mode::Vertex));
  CHECK(vertex.objective == 4.0);
  CHECK(vertex.eta[2] == 2.0);
  CHECK(vertex.eta[0] == 0.0);
}

TEST_CASE("solve on K2 is fully constrained") {
  RelaxationSpec spec = build_relaxation(fixtures::complete(2), 2, Mode::Edge);
  SolverConfig cfg;
  cfg.seed = 1;
  EmbeddingSolution sol = solve(spec, cfg);
  CHECK(sol.trace.converged);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(sol.dot(0, 1)) <= 2e-4);
}

TEST_CASE("solve recovers the block structure of disjoint K4s") {
  PlantedInstance inst = blocks_instance(3);
  RelaxationSpec spec = build_relaxation(inst.graph, 3, Mode::Edge);
  SolverConfig cfg;
  cfg.seed = 3;
  EmbeddingSolution sol = solve(spec, cfg);
  CHECK(sol.trace.converged);
  CHECK(sol.objective <= 1e-3 * inst.graph.n());
  CHECK(sol.residuals.within(1e-4));
  for (int t = 0; t < 3; ++t) {
    const auto& part = inst.parts[t].members();
    for (std::size_t a = 0; a < part.size(); ++a)
      for (std::size_t b = a + 1; b < part.size(); ++b)
        CHECK(sol.dot(part[a], part[b]) >= 0.99);
  }
  CHECK(sol.dot(inst.parts[0].members()[0], inst.parts[1].members()[0]) <= 0.01);
}

TEST_CASE("k > n is rejected with an infeasibility certificate") {
  RelaxationSpec spec = build_relaxation(fixtures::complete(2), 5, Mode::Edge);
  SolverConfig cfg;
  CHECK_THROWS_AS(solve(spec, cfg), InfeasibleError);
}

TEST_CASE("separate_triangles finds violated triples") {
  EmbeddingSolution integral = integral_embedding(blocks_instance(3));
  CHECK(separate_triangles(integral, 100).empty());

  // collinear points at squared distances 1, 1, 4 violate by 2
  EmbeddingSolution line =
      fixtures::embedding_from_rows({{0.0}, {1.0}, {2.0}}, Mode::Edge, 2);
  auto found = separate_triangles(line, 10);
  REQUIRE(!found.empty());
  CHECK(found[0].violation == doctest::Approx(2.0));
  CHECK(found[0].j == 1);

  Rng rng(17);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> row(4);
    double norm = 0;
    for (auto& x : row) {
      x = rng.unit() - 0.5;
      norm += x * x;
    }
    for (auto& x : row) x /= std::sqrt(norm);
    rows.push_back(row);
  }
  EmbeddingSolution random_sol = fixtures::embedding_from_rows(rows, Mode::Edge, 2);
  auto triples = separate_triangles(random_sol, 10, 1e-4, 5);
  CHECK(triples.size() <= 10);
  for (const auto& t : triples) {
    double direct = random_sol.dist2(t.i, t.k) - random_sol.dist2(t.i, t.j) -
                    random_sol.dist2(t.k, t.j);
    CHECK(direct == doctest::Approx(t.violation));
    CHECK(direct > 1e-4);
  }
}

TEST_CASE("check_feasibility flags a scaled row") {
  PlantedInstance inst = blocks_instance(3);
  EmbeddingSolution sol = integral_embedding(inst);
  RelaxationSpec spec = build_relaxation(inst.graph, 3, Mode::Edge);
  CHECK(check_feasibility(sol, spec).worst() == 0.0);
  sol.vectors.row(0) *= 1.1;
  ResidualReport rep = check_feasibility(sol, spec);
  CHECK(rep.diagonal == doctest::Approx(0.21));
}

TEST_CASE("penalty gradient matches central finite differences") {
  Rng rng(31);
  for (Mode mode : {Mode::Edge, Mode::Vertex}) {
    Graph g = fixtures::random_graph(12, rng);
    RelaxationSpec spec = build_relaxation(g, 3, mode);
    detail::PenaltyModel model;
    model.spec = &spec;
    model.row_target = spec.row_target();
    model.multipliers = Eigen::VectorXd(12);
    for (int i = 0; i < 12; ++i) model.multipliers(i) = rng.unit() - 0.5;
    model.rho_eq = 0.7;
    model.rho_neg = 1.3;
    model.rho_tri = 2.1;
    model.triangles = {{0, 1, 2}, {3, 4, 5}, {1, 5, 9}, {2, 7, 11}};

    Eigen::MatrixXd y(12, 4);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 4; ++j) y(i, j) = rng.unit() - 0.5;

    Eigen::MatrixXd grad;
    model.value_and_grad(y, grad);
    const double h = 1e-6;
    double worst_rel = 0.0;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 4; ++j) {
        Eigen::MatrixXd yp = y, ym = y;
        yp(i, j) += h;
        ym(i, j) -= h;
        double fd = (model.value(yp) - model.value(ym)) / (2 * h);
        double rel = std::abs(fd - grad(i, j)) / std::max(1.0, std::abs(grad(i, j)));
        worst_rel = std::max(worst_rel, rel);
      }
    CHECK(worst_rel <= 1e-5);
  }
}

TEST_CASE("solver is deterministic for a fixed seed") {
  PlantedInstance inst = blocks_instance(3);
  RelaxationSpec spec = build_relaxation(inst.graph, 3, Mode::Edge);
  SolverConfig cfg;
  cfg.seed = 9;
  EmbeddingSolution a = solve(spec, cfg);
  EmbeddingSolution b = solve(spec, cfg);
  CHECK(a.vectors == b.vectors);
  CHECK(a.objective == b.objective);
  CHECK(a.trace.inner_iters == b.trace.inner_iters);
}

TEST_CASE("feasibility-implied identities hold on solver output") {
  PlantedInstance inst = blocks_instance(3);
  RelaxationSpec spec = build_relaxation(inst.graph, 3, Mode::Edge);
  SolverConfig cfg;
  cfg.seed = 4;
  EmbeddingSolution sol = solve(spec, cfg);
  const int n = sol.n();

  Eigen::RowVectorXd colsum = sol.vectors.colwise().sum();
  double pair_sum = 2.0 * n * n - 2.0 * colsum.squaredNorm();
  CHECK(std::abs(pair_sum - 2.0 * n * n * (1.0 - 1.0 / 3.0)) <= 4.0 * n * n * 1e-4);

  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int j = 0; j < n; ++j)
      if (sol.dist2(i, j) <= 1.0 / 50.0) ++count;
    CHECK(count <= 9 * n / 10);
  }
}

TEST_CASE("vertex mode eta is consistent with the vectors") {
  PlantedInstance inst = bridge_instance(Mode::Vertex);
  RelaxationSpec spec = build_relaxation(inst.graph, 2, Mode::Vertex);
  SolverConfig cfg;
  cfg.seed = 5;
  EmbeddingSolution sol = solve(spec, cfg);
  REQUIRE(sol.eta.size() == 6);
  double total = 0;
  for (int i = 0; i < 6; ++i) {
    double worst = 0;
    for (int j : inst.graph.neighbors(i)) worst = std::max(worst, sol.dist2(i, j));
    CHECK(sol.eta[i] == doctest::Approx(worst).epsilon(1e-12));
    total += sol.eta[i];
  }
  CHECK(sol.objective == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("warm start stays within the relaxation bound") {
  PlantedInstance inst = bridge_instance(Mode::Edge);
  RelaxationSpec spec = build_relaxation(inst.graph, 2, Mode::Edge);
  SolverConfig cfg;
  cfg.seed = 6;
  EmbeddingSolution warm = solve(spec, cfg, integral_embedding(inst).vectors);
  CHECK(warm.objective <= 1.0 + 1e-3 * inst.graph.n());
  CHECK(warm.residuals.within(1e-4));
}

TEST_CASE("tiny budgets return a flagged best iterate") {
  PlantedInstance inst = blocks_instance(3);
  RelaxationSpec spec = build_relaxation(inst.graph, 3, Mode::Edge);
  SolverConfig cfg;
  cfg.seed = 8;
  cfg.max_outer = 1;
  cfg.max_inner = 2;
  EmbeddingSolution sol = solve(spec, cfg);
  CHECK_FALSE(sol.trace.converged);
  CHECK(sol.n() == 12);
}

TEST_CASE("objective agrees with an independent evaluation") {
  PlantedInstance inst = blocks_instance(3);
  RelaxationSpec spec = build_relaxation(inst.graph, 3, Mode::Edge);
  SolverConfig cfg;
  cfg.seed = 10;
  EmbeddingSolution sol = solve(spec, cfg);
  double direct = 0;
  for (const auto& [u, v] : inst.graph.edges()) direct += 0.5 * sol.dist2(u, v);
  CHECK(sol.objective == doctest::Approx(direct).epsilon(1e-9));
}
