#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "kpart/errors.hpp"
#include "kpart/graph.hpp"
#include "kpart/oracle.hpp"

using namespace kpart;

TEST_CASE("build_graph canonicalizes and validates") {
  Graph single = Graph::build(2, {{0, 1}});
  CHECK(single.m() == 1);
  CHECK(single.degree(0) == 1);
  CHECK(single.degree(1) == 1);

  Graph c4 = fixtures::cycle(4);
  CHECK(c4.m() == 4);
  for (int v = 0; v < 4; ++v) CHECK(c4.degree(v) == 2);
  CHECK(c4.edges() == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}, {2, 3}});

  CHECK_THROWS_AS(Graph::build(3, {{0, 1}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(Graph::build(3, {{1, 1}}), ValidationError);
  CHECK_THROWS_AS(Graph::build(3, {{0, 3}}), ValidationError);
  CHECK_THROWS_AS(Graph::build(3, {{-1, 0}}), ValidationError);
}

TEST_CASE("vertex sets validate and complement") {
  CHECK_THROWS_AS(VertexSet::of({0, 0}, 3), ValidationError);
  CHECK_THROWS_AS(VertexSet::of({3}, 3), ValidationError);
  VertexSet s = VertexSet::of({2, 0}, 4);
  CHECK(s.members() == std::vector<int>{0, 2});
  CHECK(s.complement(4).members() == std::vector<int>{1, 3});
}

TEST_CASE("edge_boundary matches hand counts") {
  Graph c4 = fixtures::cycle(4);
  auto cut = edge_boundary(c4, VertexSet::of({0, 1}, 4));
  CHECK(cut == std::vector<Edge>{{0, 3}, {1, 2}});

  Graph bridge = fixtures::two_triangles_bridge();
  CHECK(edge_boundary(bridge, VertexSet::of({0, 1, 2}, 6)) == std::vector<Edge>{{2, 3}});

  Graph k4 = fixtures::complete(4);
  CHECK(edge_boundary(k4, VertexSet::of({0}, 4)).size() == 3);

  CHECK_THROWS_AS(edge_boundary(c4, VertexSet::of({}, 4)), ValidationError);
  CHECK_THROWS_AS(edge_boundary(c4, VertexSet::of({0, 1, 2, 3}, 4)), ValidationError);
}

TEST_CASE("vertex_boundary matches hand counts") {
  Graph c4 = fixtures::cycle(4);
  CHECK(vertex_boundary(c4, VertexSet::of({0, 1}, 4)).members() ==
        std::vector<int>{0, 1, 2, 3});

  Graph bridge = fixtures::two_triangles_bridge();
  CHECK(vertex_boundary(bridge, VertexSet::of({0, 1, 2}, 6)).members() ==
        std::vector<int>{2, 3});

  Graph p3 = fixtures::path(3);
  CHECK(vertex_boundary(p3, VertexSet::of({0}, 3)).members() == std::vector<int>{0, 1});
}

TEST_CASE("expansion values match the formulas") {
  Graph k2 = fixtures::complete(2);
  CHECK(edge_expansion(k2, VertexSet::of({0}, 2)) == doctest::Approx(2.0));
  CHECK(vertex_expansion(k2, VertexSet::of({0}, 2)) == doctest::Approx(4.0));

  Graph c4 = fixtures::cycle(4);
  CHECK(edge_expansion(c4, VertexSet::of({0, 1}, 4)) == doctest::Approx(2.0));
  CHECK(vertex_expansion(c4, VertexSet::of({0, 1}, 4)) == doctest::Approx(4.0));

  Graph bridge = fixtures::two_triangles_bridge();
  CHECK(edge_expansion_exact(bridge, VertexSet::of({0, 1, 2}, 6)) == Rational::of(2, 3));
  CHECK(vertex_expansion_exact(bridge, VertexSet::of({0, 1, 2}, 6)) == Rational::of(4, 3));
}

TEST_CASE("kway_expansion takes the worst part") {
  Graph bridge = fixtures::two_triangles_bridge();
  std::vector<VertexSet> parts{VertexSet::of({0, 1, 2}, 6), VertexSet::of({3, 4, 5}, 6)};
  auto edge_rep = kway_expansion(bridge, parts, Mode::Edge);
  CHECK(edge_rep.max_exact == Rational::of(2, 3));
  auto vertex_rep = kway_expansion(bridge, parts, Mode::Vertex);
  CHECK(vertex_rep.max_exact == Rational::of(4, 3));

  // C6 split into adjacent pairs; every part is cut by two edges.
  Graph c6 = fixtures::cycle(6);
  std::vector<VertexSet> pairs{VertexSet::of({0, 1}, 6), VertexSet::of({2, 3}, 6),
                               VertexSet::of({4, 5}, 6)};
  auto rep = kway_expansion(c6, pairs, Mode::Edge);
  CHECK(rep.max_value == doctest::Approx(1.5));
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    Rational naive = naive_expansion(c6, pairs[t], Mode::Edge);
    CHECK(rep.per_part_exact[t] == naive);
  }

  CHECK_THROWS_AS(kway_expansion(bridge, {parts[0], parts[0]}, Mode::Edge), ValidationError);
}

TEST_CASE("spectral_gap on reference graphs") {
  auto k4 = spectral_gap(fixtures::complete(4));
  CHECK(k4.lambda2 == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(k4.residual <= 1e-8);

  auto c4 = spectral_gap(fixtures::cycle(4));
  CHECK(c4.lambda2 == doctest::Approx(1.0).epsilon(1e-9));

  // P3 normalized Laplacian has eigenvalues {0, 1, 2}.
  auto p3 = spectral_gap(fixtures::path(3));
  CHECK(p3.lambda2 == doctest::Approx(1.0).epsilon(1e-9));

  for (int n = 3; n <= 10; ++n) {
    auto rep = spectral_gap(fixtures::complete(n));
    CHECK(rep.lambda2 ==
          doctest::Approx(static_cast<double>(n) / (n - 1)).epsilon(1e-10));
  }

  Graph isolated = Graph::build(3, {{0, 1}});
  CHECK_THROWS_AS(spectral_gap(isolated), ValidationError);
}

TEST_CASE("iterative eigensolver agrees with the dense path") {
  Rng rng(99);
  Graph g = fixtures::random_graph(60, rng);
  auto dense = spectral_gap(g);
  auto iterative = detail::spectral_gap_iterative(g);
  CHECK(iterative.lambda2 == doctest::Approx(dense.lambda2).epsilon(1e-6));
}

TEST_CASE("expansion symmetry and boundary relations on random graphs") {
  Rng rng(4242);
  for (int round = 0; round < 100; ++round) {
    int n = 4 + rng.index(9);
    Graph g = fixtures::random_graph(n, rng);
    VertexSet s = fixtures::random_proper_subset(n, rng);
    VertexSet sc = s.complement(n);

    CHECK(edge_expansion_exact(g, s) == edge_expansion_exact(g, sc));
    CHECK(vertex_expansion_exact(g, s) == vertex_expansion_exact(g, sc));

    auto cut = edge_boundary(g, s);
    auto vb = vertex_boundary(g, s);
    CHECK(edge_expansion_exact(g, s).num >= 0);
    CHECK((cut.empty() ? edge_expansion_exact(g, s).num == 0
                       : edge_expansion_exact(g, s).num > 0));
    CHECK((vb.empty() ? vertex_expansion_exact(g, s).num == 0
                      : vertex_expansion_exact(g, s).num > 0));

    std::set<int> endpoints;
    for (auto& [u, v] : cut) {
      endpoints.insert(u);
      endpoints.insert(v);
    }
    for (int v : vb.members()) CHECK(endpoints.count(v) == 1);
    CHECK(vb.size() <= 2 * static_cast<int>(cut.size()));
  }
}

TEST_CASE("expansions match the naive oracle exactly on random graphs") {
  Rng rng(777);
  for (int round = 0; round < 100; ++round) {
    int n = 4 + rng.index(9);
    Graph g = fixtures::random_graph(n, rng);
    VertexSet s = fixtures::random_proper_subset(n, rng);
    CHECK(edge_expansion_exact(g, s) == naive_expansion(g, s, Mode::Edge));
    CHECK(vertex_expansion_exact(g, s) == naive_expansion(g, s, Mode::Vertex));
  }
}

TEST_CASE("induced subgraph relabels consistently") {
  Graph bridge = fixtures::two_triangles_bridge();
  Graph tri = induced_subgraph(bridge, VertexSet::of({3, 4, 5}, 6));
  CHECK(tri.n() == 3);
  CHECK(tri.m() == 3);
  CHECK(tri.has_edge(0, 1));
}
