#include "kpart/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "kpart/errors.hpp"
#include "kpart/oracle.hpp"
#include "kpart/rng.hpp"
#include "kpart/rounding.hpp"
#include "kpart/svg.hpp"

namespace kpart {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct Cell {
  int k;
  double eps;
  double lambda_min;
  int d;
  double r;
  std::string adversary;
};

std::vector<Cell> expand_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (int k : cfg.k)
    for (double eps : cfg.eps)
      for (double lm : cfg.lambda_min)
        for (int d : cfg.d)
          for (double r : cfg.r)
            for (const auto& adv : cfg.adversary) cells.push_back({k, eps, lm, d, r, adv});
  return cells;
}

ExperimentRecord run_cell(const ExperimentConfig& cfg, int cell_index, int replicate,
                          const Cell& cell) {
  ExperimentRecord rec;
  rec.cell = cell_index;
  rec.replicate = replicate;
  rec.mode = cfg.mode;
  rec.n = cfg.n;
  rec.k = cell.k;
  rec.d = cell.d;
  rec.eps = cell.eps;
  rec.lambda_min = cell.lambda_min;
  rec.r = cell.r;
  rec.adversary = cell.adversary;
  rec.seed = Rng::mix(cfg.seed, static_cast<std::uint64_t>(cell_index) * 1000003ULL +
                                    static_cast<std::uint64_t>(replicate));
  auto start = std::chrono::steady_clock::now();
  try {
    PlantedParams params;
    params.n = cfg.n;
    params.k = cell.k;
    params.eps = cell.eps;
    params.lambda_min = cell.lambda_min;
    params.d = cell.d;
    params.r = cell.r;
    params.seed = rec.seed;
    params.adversary = AdversaryPolicy::parse(cell.adversary);
    PlantedInstance inst =
        cfg.mode == Mode::Edge ? gen_kpart_edge(params) : gen_kpart_vertex(params);

    InstanceValidation val = validate_instance(inst);
    rec.achieved_lambda_min = val.min_lambda;
    rec.premise_value = val.premise_value;
    rec.premise_holds = val.premise_holds;
    rec.cross_edges = static_cast<int>(inst.cross_edges.size());
    rec.integral_objective = val.integral_objective;

    RelaxationSpec spec = build_relaxation(inst.graph, cell.k, cfg.mode);
    SolverConfig scfg = cfg.solver;
    scfg.seed = Rng::mix(rec.seed, 0x50Fe1ULL);
    EmbeddingSolution sol = solve(spec, scfg);
    rec.sdp_objective = sol.objective;
    rec.solver_converged = sol.trace.converged;
    rec.resid_worst = sol.residuals.worst();

    const int n = cfg.n;
    Eigen::VectorXd colsum = sol.vectors.colwise().sum();
    double pair_sum = 2.0 * n * n - 2.0 * colsum.squaredNorm();
    rec.spread_gap = std::abs(pair_sum - 2.0 * n * n * (1.0 - 1.0 / cell.k));
    for (int i = 0; i < n; ++i) {
      int count = 0;
      for (int j = 0; j < n; ++j)
        if (sol.dist2(i, j) <= 1.0 / 50.0) ++count;
      rec.ball_max = std::max(rec.ball_max, count);
    }

    DiagnosticsReport diag = cluster_diagnostics(sol, inst);
    auto bit = [](bool b) { return b ? '1' : '0'; };
    rec.diag_bits = std::string() + bit(diag.pass_deviation) + bit(diag.pass_norm) +
                    bit(diag.pass_inner) + bit(diag.pass_distance) + bit(diag.pass_overlap) +
                    bit(diag.pass_separation);
    rec.diag_all = diag.all_pass();

    PartitionResult rounded = round_greedy(sol, inst.graph, cell.k, cfg.mode);
    rec.sets_found = static_cast<int>(rounded.sets.size());
    rec.min_set_size = rounded.sets.empty() ? 0 : rounded.sets.front().size();
    for (const auto& s : rounded.sets) rec.min_set_size = std::min(rec.min_set_size, s.size());
    for (double e : rounded.expansions) rec.max_set_expansion = std::max(rec.max_set_expansion, e);
    if (!rounded.partial) {
      OverlapStats overlap = overlap_with_parts(rounded, inst.parts);
      rec.overlap_majority = overlap.distinct_majority;
      rec.min_overlap_frac = 1.0;
      for (std::size_t t = 0; t < rounded.sets.size(); ++t)
        rec.min_overlap_frac = std::min(
            rec.min_overlap_frac,
            static_cast<double>(overlap.overlap[t]) / inst.parts[overlap.best_part[t]].size());
      if (cfg.complete) {
        PartitionResult completed = complete_partition(rounded, inst.graph, cfg.mode);
        for (double e : completed.expansions)
          rec.completed_max_expansion = std::max(rec.completed_max_expansion, e);
        if (cfg.n <= cfg.oracle_max_n) {
          SandwichReport sandwich =
              sandwich_check(inst.graph, cell.k, cfg.mode, sol.objective, completed.sets);
          rec.oracle_opt = sandwich.opt.to_double();
          rec.oracle_sdp_ok = sandwich.sdp_within;
          rec.oracle_pipeline_ok = sandwich.pipeline_at_least_opt;
        }
      }
    } else {
      rec.status = "partial: " + rounded.diagnostic;
    }
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

const char* kSchemaLine =
    "# cell=sweep cell index; replicate=replicate index within the cell; status=ok, partial "
    "or error; mode=edge or vertex; n=vertex count; k=part count; d=base block degree; "
    "eps=model expansion parameter; lambda_min=required block spectral gap; r=degree ratio "
    "bound; adversary=adversary policy; seed=derived cell seed; "
    "achieved_lambda_min=smallest measured pre-adversary block gap; "
    "premise_value=eps*k*r^3/achieved_lambda_min; premise_holds=premise_value <= 1/800; "
    "cross_edges=inter-part edges placed; integral_objective=objective of the planted "
    "assignment; sdp_objective=solver objective; solver_converged=all residual families "
    "within tolerance; resid_worst=worst residual family; spread_gap=|sum_ij d(i,j) - "
    "2n^2(1-1/k)|; ball_max=max_i |B(i,1/50)|; diag_bits=diagnostics checks a-f as 0/1; "
    "diag_all=all six diagnostics hold; sets_found=sets extracted by rounding; "
    "min_set_size=smallest extracted set; max_set_expansion=worst extracted-set expansion; "
    "overlap_majority=each set majority-overlaps a distinct planted part; "
    "min_overlap_frac=smallest |W_t cap S_t|/|S_t|; completed_max_expansion=worst part "
    "expansion after completion; oracle_opt=exact balanced optimum (-1 if skipped); "
    "oracle_sdp_ok=sdp_objective/n <= opt + 1e-3; oracle_pipeline_ok=completed partition "
    "expansion >= opt";

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << kSchemaLine << "\n";
  out << "cell,replicate,status,mode,n,k,d,eps,lambda_min,r,adversary,seed,"
         "achieved_lambda_min,premise_value,premise_holds,cross_edges,integral_objective,"
         "sdp_objective,solver_converged,resid_worst,spread_gap,ball_max,diag_bits,diag_all,"
         "sets_found,min_set_size,max_set_expansion,overlap_majority,min_overlap_frac,"
         "completed_max_expansion,oracle_opt,oracle_sdp_ok,oracle_pipeline_ok\n";
  for (const auto& r : records) {
    std::string status = r.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    out << r.cell << ',' << r.replicate << ',' << status << ',' << mode_name(r.mode) << ','
        << r.n << ',' << r.k << ',' << r.d << ',' << fmt17(r.eps) << ','
        << fmt17(r.lambda_min) << ',' << fmt17(r.r) << ',' << r.adversary << ',' << r.seed
        << ',' << fmt17(r.achieved_lambda_min) << ',' << fmt17(r.premise_value) << ','
        << r.premise_holds << ',' << r.cross_edges << ',' << fmt17(r.integral_objective)
        << ',' << fmt17(r.sdp_objective) << ',' << r.solver_converged << ','
        << fmt17(r.resid_worst) << ',' << fmt17(r.spread_gap) << ',' << r.ball_max << ','
        << r.diag_bits << ',' << r.diag_all << ',' << r.sets_found << ',' << r.min_set_size
        << ',' << fmt17(r.max_set_expansion) << ',' << r.overlap_majority << ','
        << fmt17(r.min_overlap_frac) << ',' << fmt17(r.completed_max_expansion) << ','
        << fmt17(r.oracle_opt) << ',' << r.oracle_sdp_ok << ',' << r.oracle_pipeline_ok
        << "\n";
  }
  return out.str();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.mode = mode_from_name(j.value("mode", "edge"));
  cfg.n = j.value("n", 12);
  if (j.contains("k")) cfg.k = j.at("k").get<std::vector<int>>();
  if (j.contains("eps")) cfg.eps = j.at("eps").get<std::vector<double>>();
  if (j.contains("lambda_min"))
    cfg.lambda_min = j.at("lambda_min").get<std::vector<double>>();
  if (j.contains("d")) cfg.d = j.at("d").get<std::vector<int>>();
  if (j.contains("r")) cfg.r = j.at("r").get<std::vector<double>>();
  if (j.contains("adversary"))
    cfg.adversary = j.at("adversary").get<std::vector<std::string>>();
  cfg.replicates = j.value("replicates", 1);
  cfg.seed = j.value("seed", 0ULL);
  cfg.out_dir = j.value("out_dir", "out");
  cfg.complete = j.value("complete", true);
  cfg.workers = j.value("workers", 1);
  cfg.oracle_max_n = j.value("oracle_max_n", 12);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    cfg.solver.rank = s.value("rank", 0);
    cfg.solver.tau_feas = s.value("tau_feas", 1e-4);
    cfg.solver.max_outer = s.value("max_outer", 60);
    cfg.solver.max_inner = s.value("max_inner", 500);
    cfg.solver.penalty_growth = s.value("penalty_growth", 3.0);
    cfg.solver.triangle_budget = s.value("triangle_budget", 2000);
  }
  if (cfg.k.empty() || cfg.eps.empty() || cfg.lambda_min.empty() || cfg.d.empty() ||
      cfg.r.empty() || cfg.adversary.empty())
    throw ValidationError("experiment config: every sweep axis must be nonempty");
  if (cfg.replicates < 1) throw ValidationError("experiment config: replicates must be >= 1");
  return cfg;
}

std::string ExperimentConfig::to_json() const {
  ordered_json j;
  j["mode"] = mode_name(mode);
  j["n"] = n;
  j["k"] = k;
  j["eps"] = eps;
  j["lambda_min"] = lambda_min;
  j["d"] = d;
  j["r"] = r;
  j["adversary"] = adversary;
  j["replicates"] = replicates;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  ordered_json s;
  s["rank"] = solver.rank;
  s["tau_feas"] = solver.tau_feas;
  s["max_outer"] = solver.max_outer;
  s["max_inner"] = solver.max_inner;
  s["penalty_growth"] = solver.penalty_growth;
  s["triangle_budget"] = solver.triangle_budget;
  j["solver"] = s;
  j["complete"] = complete;
  j["workers"] = workers;
  j["oracle_max_n"] = oracle_max_n;
  return j.dump(2) + "\n";
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  const std::vector<Cell> cells = expand_cells(cfg);
  const int total = static_cast<int>(cells.size()) * cfg.replicates;
  ExperimentOutput out;
  out.records.resize(total);

  const int workers = std::max(1, std::min(cfg.workers, total));
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      int idx = next.fetch_add(1);
      if (idx >= total) break;
      int cell_index = idx / cfg.replicates;
      int replicate = idx % cfg.replicates;
      out.records[idx] = run_cell(cfg, cell_index, replicate, cells[cell_index]);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  out.csv = records_to_csv(out.records);
  std::ostringstream timings;
  timings << "# cell,replicate,seconds (wall times; excluded from records.csv so the table "
             "is seed-reproducible)\n";
  for (const auto& r : out.records)
    timings << r.cell << ',' << r.replicate << ',' << r.seconds << "\n";
  out.timings = timings.str();

  // pass-rate per cell vs the premise ratio
  ScatterPlot pass_plot;
  pass_plot.title = "diagnostics pass rate vs eps*k*r^3/lambda";
  pass_plot.xlabel = "eps*k*r^3/lambda (measured)";
  pass_plot.ylabel = "pass rate";
  ScatterPlot::Series pass_series{"cells", "#1f77b4", {}};
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double premise = 0;
    int passed = 0, counted = 0;
    for (int rep = 0; rep < cfg.replicates; ++rep) {
      const auto& r = out.records[c * cfg.replicates + rep];
      if (r.status.rfind("error", 0) == 0) continue;
      premise += r.premise_value;
      passed += r.diag_all ? 1 : 0;
      ++counted;
    }
    if (counted > 0)
      pass_series.points.emplace_back(premise / counted,
                                      static_cast<double>(passed) / counted);
  }
  pass_plot.series.push_back(pass_series);
  out.plots["passrate_vs_premise.svg"] = pass_plot.render();

  ScatterPlot exp_plot;
  exp_plot.title = "max extracted-set expansion vs eps";
  exp_plot.xlabel = "eps";
  exp_plot.ylabel = "max set expansion";
  ScatterPlot::Series exp_series{"records", "#d62728", {}};
  for (const auto& r : out.records)
    if (r.status == "ok") exp_series.points.emplace_back(r.eps, r.max_set_expansion);
  exp_plot.series.push_back(exp_series);
  out.plots["expansion_vs_eps.svg"] = exp_plot.render();

  ScatterPlot overlap_plot;
  overlap_plot.title = "planted-part overlap vs eps";
  overlap_plot.xlabel = "eps";
  overlap_plot.ylabel = "min |W cap S| / |S|";
  ScatterPlot::Series overlap_series{"records", "#2ca02c", {}};
  for (const auto& r : out.records)
    if (r.status == "ok") overlap_series.points.emplace_back(r.eps, r.min_overlap_frac);
  overlap_plot.series.push_back(overlap_series);
  out.plots["overlap_vs_eps.svg"] = overlap_plot.render();

  return out;
}

void write_experiment(const ExperimentOutput& out, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::string path = out_dir + "/" + name;
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw ValidationError("cannot write " + path);
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
  };
  write("records.csv", out.csv);
  write("timings.txt", out.timings);
  for (const auto& [name, svg] : out.plots) write(name, svg);
}

}  // namespace kpart
