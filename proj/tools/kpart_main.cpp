#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kpart/errors.hpp"
#include "kpart/experiment.hpp"
#include "kpart/io.hpp"
#include "kpart/oracle.hpp"
#include "kpart/rounding.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitRounding = 4;
constexpr int kExitOracleBudget = 5;

struct GenerateArgs {
  int n = 12, k = 3, d = 3;
  double eps = 0.0, lambda_min = 0.5, r = 1.0;
  std::uint64_t seed = 0;
  std::string mode = "edge";
  std::string adversary = "none";
  int cross_edges = -1;
  std::string portal_wiring = "matching";
  int portal_edges = -1;
  std::string out = "instance.json";
};

int run_generate(const GenerateArgs& a) {
  kpart::PlantedParams params;
  params.n = a.n;
  params.k = a.k;
  params.d = a.d;
  params.eps = a.eps;
  params.lambda_min = a.lambda_min;
  params.r = a.r;
  params.seed = a.seed;
  params.adversary = kpart::AdversaryPolicy::parse(a.adversary);
  params.cross_edges = a.cross_edges;
  params.portal_wiring = kpart::portal_wiring_from_name(a.portal_wiring);
  params.portal_edges = a.portal_edges;

  kpart::Mode mode = kpart::mode_from_name(a.mode);
  kpart::PlantedInstance inst =
      mode == kpart::Mode::Edge ? kpart::gen_kpart_edge(params) : kpart::gen_kpart_vertex(params);
  kpart::write_file(a.out, kpart::instance_to_json(inst));
  std::cout << "wrote " << a.out << " (n=" << inst.graph.n() << ", m=" << inst.graph.m()
            << ", cross_edges=" << inst.cross_edges.size() << ")\n";
  std::cout << kpart::validation_to_text(kpart::validate_instance(inst));
  return kExitOk;
}

struct SolveArgs {
  std::string instance;
  std::string out = "embedding.txt";
  int rank = 0;
  double tol = 1e-4;
  int max_outer = 60;
  int max_inner = 500;
  double growth = 3.0;
  int triangle_budget = 2000;
  std::uint64_t seed = 0;
  bool warm_start = false;
};

int run_solve(const SolveArgs& a) {
  kpart::PlantedInstance inst = kpart::instance_from_json(kpart::read_file(a.instance));
  kpart::RelaxationSpec spec =
      kpart::build_relaxation(inst.graph, inst.params.k, inst.mode);
  kpart::SolverConfig cfg;
  cfg.rank = a.rank;
  cfg.tau_feas = a.tol;
  cfg.max_outer = a.max_outer;
  cfg.max_inner = a.max_inner;
  cfg.penalty_growth = a.growth;
  cfg.triangle_budget = a.triangle_budget;
  cfg.seed = a.seed;

  kpart::EmbeddingSolution sol =
      a.warm_start ? kpart::solve(spec, cfg, kpart::integral_embedding(inst).vectors)
                   : kpart::solve(spec, cfg);
  kpart::write_file(a.out, kpart::write_embedding(sol));
  std::cout << "objective = " << sol.objective << "\n";
  std::cout << "residuals: diagonal=" << sol.residuals.diagonal
            << " nonneg=" << sol.residuals.nonneg << " rowsum=" << sol.residuals.rowsum
            << " triangle=" << sol.residuals.triangle << " eta=" << sol.residuals.eta << "\n";
  std::cout << "outer=" << sol.trace.outer_iters << " inner=" << sol.trace.inner_iters
            << " active_triangles=" << sol.trace.active_triangles << "\n";
  if (!sol.trace.converged) {
    std::cerr << "solver did not reach tolerance " << a.tol
              << "; embedding written with converged 0\n";
    return kExitSolver;
  }
  std::cout << "wrote " << a.out << "\n";
  return kExitOk;
}

struct RoundArgs {
  std::string instance;
  std::string embedding;
  std::string out = "result.json";
  bool complete = false;
  double size_floor = -1.0;
  double tol = 1e-4;
};

int run_round(const RoundArgs& a) {
  kpart::PlantedInstance inst = kpart::instance_from_json(kpart::read_file(a.instance));
  kpart::EmbeddingSolution sol = kpart::read_embedding(kpart::read_file(a.embedding));
  kpart::RelaxationSpec spec =
      kpart::build_relaxation(inst.graph, inst.params.k, inst.mode);
  kpart::ResidualReport resid = kpart::check_feasibility(sol, spec);
  if (!resid.within(a.tol))
    std::cerr << "warning: embedding residuals reach " << resid.worst() << " > " << a.tol
              << "\n";

  kpart::PartitionResult result =
      kpart::round_greedy(sol, inst.graph, inst.params.k, inst.mode, a.size_floor);
  if (!result.partial && a.complete)
    result = kpart::complete_partition(result, inst.graph, inst.mode);
  kpart::write_file(a.out, kpart::result_to_json(result));

  for (std::size_t t = 0; t < result.sets.size(); ++t) {
    std::cout << "set " << t << ": size=" << result.sets[t].size()
              << " expansion=" << result.expansions[t];
    if (result.provenance[t].center >= 0)
      std::cout << " center=" << result.provenance[t].center
                << " radius=" << result.provenance[t].radius;
    else
      std::cout << " (completion complement)";
    std::cout << "\n";
  }
  std::cout << kpart::diagnostics_to_text(kpart::cluster_diagnostics(sol, inst));
  std::cout << "wrote " << a.out << "\n";
  if (result.partial) {
    std::cerr << "partial extraction: found " << result.sets.size() << " of "
              << result.requested_k << " sets; " << result.diagnostic << "\n";
    return kExitRounding;
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string instance;
  std::string embedding;
  double tol = 1e-4;
};

int run_verify(const VerifyArgs& a) {
  kpart::PlantedInstance inst = kpart::instance_from_json(kpart::read_file(a.instance));
  std::cout << kpart::validation_to_text(kpart::validate_instance(inst));
  if (!a.embedding.empty()) {
    kpart::EmbeddingSolution sol = kpart::read_embedding(kpart::read_file(a.embedding));
    kpart::RelaxationSpec spec =
        kpart::build_relaxation(inst.graph, inst.params.k, inst.mode);
    double recomputed = kpart::objective_value(spec, sol.vectors);
    bool objective_consistent =
        std::abs(recomputed - sol.objective) <= 1e-9 * std::max(1.0, std::abs(recomputed));
    std::cout << "objective.header = " << sol.objective << "\n";
    std::cout << "objective.recomputed = " << recomputed << "\n";
    std::cout << "objective.consistent = " << objective_consistent << "\n";
    kpart::ResidualReport resid = kpart::check_feasibility(sol, spec);
    std::cout << "feasibility.diagonal = " << resid.diagonal << "\n";
    std::cout << "feasibility.nonneg = " << resid.nonneg << "\n";
    std::cout << "feasibility.rowsum = " << resid.rowsum << "\n";
    std::cout << "feasibility.triangle = " << resid.triangle << "\n";
    std::cout << "feasibility.eta = " << resid.eta << "\n";
    std::cout << "feasibility.within_tol = " << resid.within(a.tol) << "\n";
    std::cout << kpart::diagnostics_to_text(kpart::cluster_diagnostics(sol, inst));
  }
  return kExitOk;
}

struct OracleArgs {
  std::string instance;
  std::string result;
  std::string embedding;
  int k = 0;
  std::string mode;
};

int run_oracle(const OracleArgs& a) {
  kpart::PlantedInstance inst = kpart::instance_from_json(kpart::read_file(a.instance));
  int k = a.k > 0 ? a.k : inst.params.k;
  kpart::Mode mode = a.mode.empty() ? inst.mode : kpart::mode_from_name(a.mode);
  kpart::OracleResult oracle = kpart::brute_kway_opt(inst.graph, k, mode);
  std::cout << "opt = " << oracle.opt.str() << " = " << oracle.opt.to_double() << "\n";
  std::cout << "candidates = " << oracle.candidates << "\n";
  for (std::size_t t = 0; t < oracle.argmin.size(); ++t) {
    std::cout << "part " << t << ":";
    for (int v : oracle.argmin[t].members()) std::cout << " " << v;
    std::cout << "\n";
  }
  if (!a.result.empty()) {
    kpart::PartitionResult result = kpart::result_from_json(kpart::read_file(a.result));
    // Without an embedding the relaxation side of the sandwich is vacuous;
    // feed the bound it would have to clear so only the pipeline side bites.
    double sdp_objective = oracle.opt.to_double() * inst.graph.n();
    bool have_sdp = false;
    if (!a.embedding.empty()) {
      sdp_objective = kpart::read_embedding(kpart::read_file(a.embedding)).objective;
      have_sdp = true;
    }
    kpart::SandwichReport rep =
        kpart::sandwich_check(inst.graph, k, mode, sdp_objective, result.sets);
    if (have_sdp) {
      std::cout << "sdp_objective = " << rep.sdp_objective << "\n";
      std::cout << "sdp_within = " << rep.sdp_within << "\n";
    }
    std::cout << "pipeline_expansion = " << rep.pipeline_expansion << "\n";
    std::cout << "pipeline_at_least_opt = " << rep.pipeline_at_least_opt << "\n";
    std::cout << "ratio_to_k_opt = " << rep.ratio_to_k_opt << "\n";
  }
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out_dir;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  kpart::ExperimentConfig cfg = kpart::ExperimentConfig::from_json(kpart::read_file(a.config));
  if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
  kpart::ExperimentOutput out = kpart::run_experiment(cfg);
  kpart::write_experiment(out, cfg.out_dir);
  int ok = 0, bad = 0;
  for (const auto& r : out.records) (r.status == "ok" ? ok : bad) += 1;
  std::cout << "wrote " << cfg.out_dir << "/records.csv (" << out.records.size() << " rows, "
            << ok << " ok, " << bad << " flagged)\n";
  for (const auto& [name, _] : out.plots) std::cout << "wrote " << cfg.out_dir << "/" << name
                                                    << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced k-way expansion toolkit: planted instances, SDP relaxation, "
               "greedy ball rounding, exact small-scale oracles"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "generate a planted instance");
  cmd_gen->add_option("--n", gen.n, "vertex count");
  cmd_gen->add_option("--k", gen.k, "part count");
  cmd_gen->add_option("--d", gen.d, "block base degree");
  cmd_gen->add_option("--eps", gen.eps, "model expansion parameter");
  cmd_gen->add_option("--lambda-min", gen.lambda_min, "required block spectral gap");
  cmd_gen->add_option("--r", gen.r, "degree ratio bound");
  cmd_gen->add_option("--seed", gen.seed, "RNG seed");
  cmd_gen->add_option("--mode", gen.mode, "edge or vertex");
  cmd_gen->add_option("--adversary", gen.adversary,
                      "none | random_intra:COUNT | clique:PART:SIZE");
  cmd_gen->add_option("--cross-edges", gen.cross_edges,
                      "edge mode: target inter-part edges (-1 = fill cap)");
  cmd_gen->add_option("--portal-wiring", gen.portal_wiring, "matching | dense");
  cmd_gen->add_option("--portal-edges", gen.portal_edges,
                      "vertex mode: target portal edges (-1 = fill)");
  cmd_gen->add_option("--out", gen.out, "output instance file");

  SolveArgs solve_args;
  auto* cmd_solve = app.add_subcommand("solve", "solve the relaxation for an instance");
  cmd_solve->add_option("instance", solve_args.instance, "instance file")->required();
  cmd_solve->add_option("--out", solve_args.out, "output embedding file");
  cmd_solve->add_option("--rank", solve_args.rank, "factorization rank (0 = auto)");
  cmd_solve->add_option("--tol", solve_args.tol, "feasibility tolerance");
  cmd_solve->add_option("--max-outer", solve_args.max_outer, "outer iteration budget");
  cmd_solve->add_option("--max-inner", solve_args.max_inner, "inner step budget per round");
  cmd_solve->add_option("--growth", solve_args.growth, "penalty growth factor");
  cmd_solve->add_option("--triangle-budget", solve_args.triangle_budget,
                        "separated triangles per round");
  cmd_solve->add_option("--seed", solve_args.seed, "solver RNG seed");
  cmd_solve->add_flag("--warm-start", solve_args.warm_start,
                      "start from the planted assignment");

  RoundArgs round_args;
  auto* cmd_round = app.add_subcommand("round", "extract k sets from an embedding");
  cmd_round->add_option("instance", round_args.instance, "instance file")->required();
  cmd_round->add_option("embedding", round_args.embedding, "embedding file")->required();
  cmd_round->add_option("--out", round_args.out, "output result file");
  cmd_round->add_flag("--complete", round_args.complete,
                      "replace the last set by the complement of the others");
  cmd_round->add_option("--size-floor", round_args.size_floor,
                        "minimum set size (default n/2k)");
  cmd_round->add_option("--tol", round_args.tol, "feasibility tolerance for the warning");

  VerifyArgs verify_args;
  auto* cmd_verify =
      app.add_subcommand("verify", "validate an instance and optionally an embedding");
  cmd_verify->add_option("instance", verify_args.instance, "instance file")->required();
  cmd_verify->add_option("embedding", verify_args.embedding, "embedding file (optional)");
  cmd_verify->add_option("--tol", verify_args.tol, "feasibility tolerance");

  OracleArgs oracle_args;
  auto* cmd_oracle = app.add_subcommand("oracle", "exact balanced optimum at small scale");
  cmd_oracle->add_option("instance", oracle_args.instance, "instance file")->required();
  cmd_oracle->add_option("--result", oracle_args.result, "result file for the sandwich check");
  cmd_oracle->add_option("--embedding", oracle_args.embedding,
                         "embedding file supplying the relaxation objective");
  cmd_oracle->add_option("--k", oracle_args.k, "override part count");
  cmd_oracle->add_option("--mode", oracle_args.mode, "override mode");

  ExperimentArgs exp_args;
  auto* cmd_exp = app.add_subcommand("experiment", "run a sweep from a config file");
  cmd_exp->add_option("config", exp_args.config, "experiment config file")->required();
  cmd_exp->add_option("--out", exp_args.out_dir, "override output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_solve->parsed()) return run_solve(solve_args);
    if (cmd_round->parsed()) return run_round(round_args);
    if (cmd_verify->parsed()) return run_verify(verify_args);
    if (cmd_oracle->parsed()) return run_oracle(oracle_args);
    if (cmd_exp->parsed()) return run_experiment_cmd(exp_args);
  } catch (const kpart::OracleBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOracleBudget;
  } catch (const kpart::DegenerateEmbeddingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRounding;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
