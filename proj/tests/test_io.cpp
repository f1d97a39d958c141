#include "doctest.h"
#include "fixtures.hpp"
#include "kpart/errors.hpp"
#include "kpart/experiment.hpp"
#include "kpart/io.hpp"
#include "kpart/rounding.hpp"

using namespace kpart;

TEST_CASE("edge list round trip emits canonical order") {
  Graph g = Graph::build(3, {{1, 2}, {0, 1}});
  std::string text = write_edge_list(g);
  CHECK(text == "3 2\n0 1\n1 2\n");
  Graph back = read_edge_list(text);
  CHECK(back.edges() == g.edges());
  CHECK_THROWS_AS(read_edge_list("oops"), ParseError);
  CHECK_THROWS_AS(read_edge_list("3 2\n0 1\n"), ParseError);
}

TEST_CASE("instance container round trips and is stable") {
  PlantedParams params = fixtures::params(60, 3, 0.05, 0.2, 6, 17);
  params.adversary = AdversaryPolicy::clique_within_part(2, 4);
  PlantedInstance inst = gen_kpart_edge(params);
  std::string text = instance_to_json(inst);
  PlantedInstance back = instance_from_json(text);
  CHECK(back.graph.edges() == inst.graph.edges());
  CHECK(back.parts.size() == inst.parts.size());
  for (std::size_t t = 0; t < inst.parts.size(); ++t) CHECK(back.parts[t] == inst.parts[t]);
  CHECK(back.params.eps == inst.params.eps);
  CHECK(back.params.seed == inst.params.seed);
  CHECK(back.adversary_edges == inst.adversary_edges);
  CHECK(back.achieved_lambda == inst.achieved_lambda);
  // stable key order: re-serialization is byte identical
  CHECK(instance_to_json(back) == text);
  CHECK_THROWS_AS(instance_from_json("{}"), ParseError);
  CHECK_THROWS_AS(instance_from_json("not json"), ParseError);
}

TEST_CASE("vertex instance serializes portal sets") {
  PlantedInstance inst = gen_kpart_vertex(fixtures::params(60, 3, 0.1, 0.2, 6, 18));
  PlantedInstance back = instance_from_json(instance_to_json(inst));
  REQUIRE(back.t_sets.size() == 3);
  for (std::size_t t = 0; t < 3; ++t) CHECK(back.t_sets[t] == inst.t_sets[t]);
  CHECK(back.mode == Mode::Vertex);
}

TEST_CASE("embedding files round trip bit-stably") {
  PlantedInstance inst = gen_kpart_edge(fixtures::params(12, 3, 0.0, 1.0, 3, 7));
  RelaxationSpec spec = build_relaxation(inst.graph, 3, Mode::Edge);
  SolverConfig cfg;
  cfg.seed = 2;
  EmbeddingSolution sol = solve(spec, cfg);
  std::string text = write_embedding(sol);
  EmbeddingSolution back = read_embedding(text);
  CHECK(back.n() == sol.n());
  CHECK(back.p() == sol.p());
  CHECK(back.vectors == sol.vectors);  // exact, all 17 digits survive
  CHECK(back.objective == sol.objective);
  CHECK(back.residuals.rowsum == sol.residuals.rowsum);
  CHECK(back.trace.converged == sol.trace.converged);
  CHECK(write_embedding(back).substr(0, text.find('\n')) ==
        text.substr(0, text.find('\n')));
}

TEST_CASE("embedding parse errors name the line") {
  PlantedInstance inst = gen_kpart_edge(fixtures::params(12, 3, 0.0, 1.0, 3, 7));
  EmbeddingSolution sol = integral_embedding(inst);
  std::string text = write_embedding(sol);
  // clobber the first coordinate row (line 13 of the format)
  std::size_t pos = 0;
  for (int line = 0; line < 12; ++line) pos = text.find('\n', pos) + 1;
  std::string corrupt = text.substr(0, pos) + "x y z\n";
  try {
    read_embedding(corrupt);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 13") != std::string::npos);
  }
}

TEST_CASE("result files round trip") {
  PlantedInstance inst = gen_kpart_edge(fixtures::params(12, 3, 0.0, 1.0, 3, 7));
  EmbeddingSolution sol = integral_embedding(inst);
  PartitionResult res = round_greedy(sol, inst.graph, 3, Mode::Edge);
  PartitionResult full = complete_partition(res, inst.graph, Mode::Edge);
  std::string text = result_to_json(full);
  PartitionResult back = result_from_json(text);
  CHECK(back.completed);
  CHECK(back.sets.size() == full.sets.size());
  for (std::size_t t = 0; t < full.sets.size(); ++t) {
    CHECK(back.sets[t] == full.sets[t]);
    CHECK(back.expansions_exact[t] == full.expansions_exact[t]);
    CHECK(back.provenance[t].center == full.provenance[t].center);
  }
}

TEST_CASE("experiment sweep shapes and determinism") {
  ExperimentConfig cfg;
  cfg.mode = Mode::Edge;
  cfg.n = 12;
  cfg.k = {3};
  cfg.eps = {0.0};
  cfg.lambda_min = {1.0};
  cfg.d = {3};
  cfg.adversary = {"none"};
  cfg.replicates = 1;
  cfg.seed = 5;
  cfg.solver.max_outer = 20;
  ExperimentOutput single = run_experiment(cfg);
  CHECK(single.records.size() == 1);
  CHECK(single.records[0].status == "ok");
  CHECK(single.records[0].diag_all);
  CHECK(single.records[0].oracle_opt == 0.0);

  cfg.eps = {0.0, 0.01, 0.02};
  cfg.adversary = {"none", "random_intra:2"};
  cfg.replicates = 2;
  ExperimentOutput sweep = run_experiment(cfg);
  CHECK(sweep.records.size() == 12);

  ExperimentOutput again = run_experiment(cfg);
  CHECK(again.csv == sweep.csv);

  cfg.workers = 3;
  ExperimentOutput parallel = run_experiment(cfg);
  CHECK(parallel.csv == sweep.csv);

  CHECK(sweep.plots.count("passrate_vs_premise.svg") == 1);
  CHECK(sweep.plots.at("expansion_vs_eps.svg").find("<svg") == 0);
}

TEST_CASE("experiment config json round trip") {
  ExperimentConfig cfg;
  cfg.mode = Mode::Vertex;
  cfg.n = 30;
  cfg.k = {2, 3};
  cfg.eps = {0.0, 0.1};
  cfg.lambda_min = {0.2};
  cfg.d = {3};
  cfg.replicates = 2;
  cfg.seed = 9;
  ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.mode == cfg.mode);
  CHECK(back.n == cfg.n);
  CHECK(back.k == cfg.k);
  CHECK(back.eps == cfg.eps);
  CHECK(back.replicates == cfg.replicates);
  CHECK(back.seed == cfg.seed);
  CHECK_THROWS_AS(ExperimentConfig::from_json("{\"k\": []}"), ValidationError);
  CHECK_THROWS_AS(ExperimentConfig::from_json("nope"), ParseError);
}

TEST_CASE("diagnostics and validation render to text") {
  PlantedInstance inst = gen_kpart_edge(fixtures::params(12, 3, 0.0, 1.0, 3, 7));
  EmbeddingSolution sol = integral_embedding(inst);
  DiagnosticsReport rep = cluster_diagnostics(sol, inst);
  std::string text = diagnostics_to_text(rep);
  CHECK(text.find("diag.pass.all = 1") != std::string::npos);
  std::string json = diagnostics_to_json(rep);
  CHECK(json.find("\"all\": true") != std::string::npos);
  std::string vtext = validation_to_text(validate_instance(inst));
  CHECK(vtext.find("validate.all_ok = 1") != std::string::npos);
}
