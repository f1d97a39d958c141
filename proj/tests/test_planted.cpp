#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "kpart/errors.hpp"
#include "kpart/io.hpp"
#include "kpart/oracle.hpp"
#include "kpart/planted.hpp"

using namespace kpart;

TEST_CASE("gen_regular_expander small cases") {
  // the only 3-regular graph on 4 vertices is K4, lambda = 4/3
  Graph k4 = gen_regular_expander(4, 3, 1.2, 1.0, 1);
  CHECK(k4.m() == 6);
  CHECK(spectral_gap(k4).lambda2 == doctest::Approx(4.0 / 3.0));

  Graph g = gen_regular_expander(100, 12, 0.5, 1.0, 2);
  CHECK(g.min_degree() == 12);
  CHECK(g.max_degree() == 12);
  CHECK(spectral_gap(g).lambda2 >= 0.5);

  // lambda2 <= n/(n-1) = 10/9 for any graph on 10 vertices, so 1.9 is hopeless
  CHECK_THROWS_AS(gen_regular_expander(10, 3, 1.9, 1.0, 3), GenerationError);
  CHECK_THROWS_AS(gen_regular_expander(9, 3, 0.1, 1.0, 3), ValidationError);  // odd m*d
}

TEST_CASE("gen_regular_expander honors the degree ratio") {
  Graph g = gen_regular_expander(60, 6, 0.3, 1.5, 4);
  CHECK(g.min_degree() >= 6);
  CHECK(g.max_degree() <= 9);
  CHECK(g.m() > 180);  // densified above the 6-regular base
}

TEST_CASE("gen_kpart_edge zero-eps fixture is three disjoint K4s") {
  PlantedInstance inst = gen_kpart_edge(fixtures::params(12, 3, 0.0, 1.0, 3, 7));
  CHECK(inst.graph.m() == 18);
  CHECK(inst.cross_edges.empty());
  auto rep = kway_expansion(inst.graph, inst.parts, Mode::Edge);
  CHECK(rep.max_value == 0.0);
  for (double l : inst.achieved_lambda) CHECK(l == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("gen_kpart_edge respects the cross-edge cap") {
  PlantedParams params = fixtures::params(300, 3, 1e-3, 0.5, 16, 11);
  PlantedInstance inst = gen_kpart_edge(params);
  // cap = floor(1e-3 * 16 * 300 * 2 / 9) = 1 incident cross edge per part
  std::vector<int> incident(3, 0);
  for (auto& [u, v] : inst.cross_edges) {
    ++incident[inst.part_of(u)];
    ++incident[inst.part_of(v)];
  }
  for (int c : incident) CHECK(c <= 1);
  auto rep = kway_expansion(inst.graph, inst.parts, Mode::Edge);
  CHECK(rep.max_value <= 1e-3 * 16 + 1e-12);
  for (std::size_t t = 0; t < inst.parts.size(); ++t)
    CHECK(rep.per_part_exact[t] == naive_expansion(inst.graph, inst.parts[t], Mode::Edge));
}

TEST_CASE("gen_kpart_edge divisibility error") {
  CHECK_THROWS_WITH_AS(gen_kpart_edge(fixtures::params(10, 3, 0.0, 1.0, 3, 1)),
                       doctest::Contains("multiple of k"), ValidationError);
}

TEST_CASE("gen_kpart_vertex portal structure") {
  PlantedInstance clean = gen_kpart_vertex(fixtures::params(12, 3, 0.0, 1.0, 3, 5));
  CHECK(clean.cross_edges.empty());
  for (const auto& t : clean.t_sets) CHECK(t.empty());
  CHECK(kway_expansion(clean.graph, clean.parts, Mode::Vertex).max_value == 0.0);

  PlantedInstance inst = gen_kpart_vertex(fixtures::params(300, 3, 0.02, 0.5, 16, 6));
  for (const auto& t : inst.t_sets) CHECK(t.size() == 2);
  CHECK(kway_expansion(inst.graph, inst.parts, Mode::Vertex).max_value <= 0.06 + 1e-12);

  PlantedParams dense = fixtures::params(30, 3, 0.1, 0.5, 3, 8);
  dense.portal_wiring = PortalWiring::Dense;
  PlantedInstance wired = gen_kpart_vertex(dense);
  CHECK(kway_expansion(wired.graph, wired.parts, Mode::Vertex).max_value <= 0.3 + 1e-12);
  CHECK(validate_instance(wired).portal_confinement);
}

TEST_CASE("monotone adversary policies") {
  PlantedInstance inst = gen_kpart_edge(fixtures::params(300, 3, 1e-3, 0.5, 16, 12));
  auto cut_before = edge_boundary(inst.graph, inst.parts[1]).size();

  PlantedInstance same = apply_monotone_adversary(inst, AdversaryPolicy::none(), 5);
  CHECK(same.graph.m() == inst.graph.m());

  PlantedInstance denser =
      apply_monotone_adversary(inst, AdversaryPolicy::clique_within_part(1, 5), 5);
  CHECK(denser.adversary_edges.size() == 10);
  for (auto& [u, v] : denser.adversary_edges) {
    CHECK(denser.part_of(u) == 1);
    CHECK(denser.part_of(v) == 1);
  }
  CHECK(edge_boundary(denser.graph, denser.parts[1]).size() == cut_before);
  CHECK(denser.lambda_post_adversary.size() == 3);

  PlantedInstance random_added =
      apply_monotone_adversary(inst, AdversaryPolicy::random_intra(7), 6);
  CHECK(random_added.adversary_edges.size() == 7);
  CHECK(random_added.graph.m() == inst.graph.m() + 7);

  int u = inst.parts[0].members()[0];
  int v = inst.parts[1].members()[0];
  CHECK_THROWS_WITH_AS(
      apply_monotone_adversary(inst, AdversaryPolicy::explicit_edges({{u, v}}), 7),
      doctest::Contains("intra-part"), ValidationError);
}

TEST_CASE("pre_adversary_block strips adversary edges") {
  PlantedParams params = fixtures::params(60, 3, 0.0, 0.2, 6, 3);
  params.adversary = AdversaryPolicy::clique_within_part(0, 4);
  PlantedInstance inst = gen_kpart_edge(params);
  CHECK(inst.adversary_edges.size() == 6);
  Graph block = inst.pre_adversary_block(0);
  CHECK(block.min_degree() == 6);
  CHECK(block.max_degree() == 6);
  CHECK(spectral_gap(block).lambda2 == doctest::Approx(inst.achieved_lambda[0]));
}

TEST_CASE("validate_instance premise arithmetic") {
  // synthetic instance so the certified gap is exactly the one under test
  PlantedInstance inst;
  inst.mode = Mode::Edge;
  inst.graph = fixtures::disjoint_k4s(3);
  for (int t = 0; t < 3; ++t) {
    std::vector<int> ids{4 * t, 4 * t + 1, 4 * t + 2, 4 * t + 3};
    inst.parts.push_back(VertexSet::of(ids, 12));
  }
  inst.params = fixtures::params(12, 3, 2e-4, 0.5, 3, 1);
  inst.achieved_lambda = {0.6, 0.6, 0.6};

  InstanceValidation holds = validate_instance(inst);
  CHECK(holds.premise_value == doctest::Approx(1e-3));
  CHECK(holds.premise_holds);  // 1e-3 <= 1/800 = 1.25e-3

  inst.params.eps = 1e-2;
  InstanceValidation fails = validate_instance(inst);
  CHECK_FALSE(fails.premise_holds);

  PlantedInstance clean = gen_kpart_edge(fixtures::params(12, 3, 0.0, 1.0, 3, 2));
  InstanceValidation rep = validate_instance(clean);
  CHECK(rep.premise_value == 0.0);
  CHECK(rep.premise_holds);
  CHECK(rep.max_part_expansion == 0.0);
  CHECK(rep.all_ok());
}

TEST_CASE("generation is deterministic in the seed") {
  PlantedParams params = fixtures::params(60, 3, 0.05, 0.2, 6, 21);
  PlantedInstance a = gen_kpart_edge(params);
  PlantedInstance b = gen_kpart_edge(params);
  CHECK(instance_to_json(a) == instance_to_json(b));

  params.seed = 22;
  PlantedInstance c = gen_kpart_edge(params);
  CHECK(instance_to_json(a) != instance_to_json(c));

  PlantedParams vparams = fixtures::params(60, 3, 0.1, 0.2, 6, 23);
  CHECK(instance_to_json(gen_kpart_vertex(vparams)) ==
        instance_to_json(gen_kpart_vertex(vparams)));
}

TEST_CASE("model conformance holds across random parameters") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PlantedParams params = fixtures::params(120, 3, 0.01 * static_cast<double>(seed), 0.2, 6,
                                            seed * 31);
    PlantedInstance edge_inst = gen_kpart_edge(params);
    InstanceValidation erep = validate_instance(edge_inst);
    CHECK(erep.lambda_certified);
    CHECK(erep.expansion_within_model);

    PlantedInstance vertex_inst = gen_kpart_vertex(params);
    InstanceValidation vrep = validate_instance(vertex_inst);
    CHECK(vrep.lambda_certified);
    CHECK(vrep.expansion_within_model);
    CHECK(vrep.portal_confinement);
  }
}
