#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kpart/errors.hpp"
#include "kpart/experiment.hpp"
#include "kpart/io.hpp"
#include "kpart/oracle.hpp"
#include "kpart/rounding.hpp"

namespace py = pybind11;
using namespace kpart;

namespace {

VertexSet make_set(const Graph& g, const std::vector<int>& ids) {
  return VertexSet::of(ids, g.n());
}

std::vector<VertexSet> make_sets(const Graph& g, const std::vector<std::vector<int>>& parts) {
  std::vector<VertexSet> out;
  for (const auto& p : parts) out.push_back(make_set(g, p));
  return out;
}

py::dict residuals_dict(const ResidualReport& r) {
  py::dict d;
  d["diagonal"] = r.diagonal;
  d["nonneg"] = r.nonneg;
  d["rowsum"] = r.rowsum;
  d["triangle"] = r.triangle;
  d["eta"] = r.eta;
  d["worst"] = r.worst();
  d["triangle_exact"] = r.triangle_exact;
  return d;
}

py::dict validation_dict(const InstanceValidation& v) {
  py::dict d;
  d["per_part_lambda"] = v.per_part_lambda;
  d["min_lambda"] = v.min_lambda;
  d["lambda_certified"] = v.lambda_certified;
  d["degree_min"] = v.degree_min;
  d["degree_max"] = v.degree_max;
  d["per_part_expansion"] = v.per_part_expansion;
  d["max_part_expansion"] = v.max_part_expansion;
  d["model_bound"] = v.model_bound;
  d["expansion_within_model"] = v.expansion_within_model;
  d["premise_value"] = v.premise_value;
  d["premise_holds"] = v.premise_holds;
  d["integral_objective"] = v.integral_objective;
  d["integral_bound"] = v.integral_bound;
  d["integral_within_bound"] = v.integral_within_bound;
  d["portal_confinement"] = v.portal_confinement;
  d["all_ok"] = v.all_ok();
  return d;
}

py::dict diagnostics_dict(const DiagnosticsReport& rep) {
  py::dict d;
  d["k"] = rep.k;
  d["eps_param"] = rep.eps_param;
  d["eps_effective"] = rep.eps_effective;
  d["lambda_used"] = rep.lambda_used;
  d["bound"] = rep.bound;
  d["centroids"] = rep.centroids;
  d["mean_sq_deviation"] = rep.mean_sq_deviation;
  d["centroid_norm_sq"] = rep.centroid_norm_sq;
  d["centroid_inner"] = rep.centroid_inner;
  d["centroid_dist2"] = rep.centroid_dist2;
  d["core_size"] = rep.core_size;
  d["core_overlap"] = rep.core_overlap;
  d["core_diameter"] = rep.core_diameter;
  d["core_separation"] = rep.core_separation;
  d["pass_deviation"] = rep.pass_deviation;
  d["pass_norm"] = rep.pass_norm;
  d["pass_inner"] = rep.pass_inner;
  d["pass_distance"] = rep.pass_distance;
  d["pass_overlap"] = rep.pass_overlap;
  d["pass_separation"] = rep.pass_separation;
  d["all_pass"] = rep.all_pass();
  return d;
}

PlantedParams params_from_args(int n, int k, double eps, double lambda_min, int d, double r,
                               std::uint64_t seed, const std::string& adversary,
                               int cross_edges, const std::string& portal_wiring,
                               int portal_edges) {
  PlantedParams params;
  params.n = n;
  params.k = k;
  params.eps = eps;
  params.lambda_min = lambda_min;
  params.d = d;
  params.r = r;
  params.seed = seed;
  params.adversary = AdversaryPolicy::parse(adversary);
  params.cross_edges = cross_edges;
  params.portal_wiring = portal_wiring_from_name(portal_wiring);
  params.portal_edges = portal_edges;
  return params;
}

SolverConfig solver_config(int rank, double tol, int max_outer, int max_inner, double growth,
                           int triangle_budget, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.rank = rank;
  cfg.tau_feas = tol;
  cfg.max_outer = max_outer;
  cfg.max_inner = max_inner;
  cfg.penalty_growth = growth;
  cfg.triangle_budget = triangle_budget;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_kpart, m) {
  m.doc() = "balanced k-way expansion toolkit: planted instances, SDP relaxation, rounding";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<OracleBudgetError>(m, "OracleBudgetError", PyExc_RuntimeError);
  py::register_exception<DegenerateEmbeddingError>(m, "DegenerateEmbeddingError",
                                                   PyExc_RuntimeError);
  py::register_exception<kpart::ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int n, const std::vector<Edge>& edges) { return Graph::build(n, edges); }),
           py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("m", &Graph::m)
      .def_property_readonly("edges", &Graph::edges)
      .def("neighbors", [](const Graph& g, int v) { return g.neighbors(v); }, py::arg("v"))
      .def("degree", &Graph::degree, py::arg("v"))
      .def("has_edge", &Graph::has_edge, py::arg("u"), py::arg("v"))
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.n()) + ", m=" + std::to_string(g.m()) + ")";
      });

  py::class_<PlantedInstance>(m, "PlantedInstance")
      .def_property_readonly("graph", [](const PlantedInstance& i) { return i.graph; })
      .def_property_readonly("mode",
                             [](const PlantedInstance& i) { return mode_name(i.mode); })
      .def_property_readonly("parts",
                             [](const PlantedInstance& i) {
                               std::vector<std::vector<int>> out;
                               for (const auto& p : i.parts) out.push_back(p.members());
                               return out;
                             })
      .def_property_readonly("t_sets",
                             [](const PlantedInstance& i) {
                               std::vector<std::vector<int>> out;
                               for (const auto& p : i.t_sets) out.push_back(p.members());
                               return out;
                             })
      .def_property_readonly("achieved_lambda",
                             [](const PlantedInstance& i) { return i.achieved_lambda; })
      .def_property_readonly("cross_edges",
                             [](const PlantedInstance& i) { return i.cross_edges; })
      .def_property_readonly("adversary_edges",
                             [](const PlantedInstance& i) { return i.adversary_edges; })
      .def_property_readonly("seed", [](const PlantedInstance& i) { return i.params.seed; })
      .def_property_readonly("k", [](const PlantedInstance& i) { return i.params.k; });

  py::class_<EmbeddingSolution>(m, "EmbeddingSolution")
      .def_property_readonly("vectors", [](const EmbeddingSolution& s) { return s.vectors; })
      .def_property_readonly("objective",
                             [](const EmbeddingSolution& s) { return s.objective; })
      .def_property_readonly("mode", [](const EmbeddingSolution& s) { return mode_name(s.mode); })
      .def_property_readonly("eta", [](const EmbeddingSolution& s) { return s.eta; })
      .def_property_readonly("converged",
                             [](const EmbeddingSolution& s) { return s.trace.converged; })
      .def_property_readonly("residuals",
                             [](const EmbeddingSolution& s) { return residuals_dict(s.residuals); })
      .def("dist2", &EmbeddingSolution::dist2, py::arg("i"), py::arg("j"));

  py::class_<PartitionResult>(m, "PartitionResult")
      .def_property_readonly("sets",
                             [](const PartitionResult& r) {
                               std::vector<std::vector<int>> out;
                               for (const auto& s : r.sets) out.push_back(s.members());
                               return out;
                             })
      .def_property_readonly("expansions",
                             [](const PartitionResult& r) { return r.expansions; })
      .def_property_readonly("provenance",
                             [](const PartitionResult& r) {
                               std::vector<std::pair<int, double>> out;
                               for (const auto& p : r.provenance)
                                 out.emplace_back(p.center, p.radius);
                               return out;
                             })
      .def_property_readonly("partial", [](const PartitionResult& r) { return r.partial; })
      .def_property_readonly("completed",
                             [](const PartitionResult& r) { return r.completed; })
      .def_property_readonly("diagnostic",
                             [](const PartitionResult& r) { return r.diagnostic; });

  m.def("edge_boundary",
        [](const Graph& g, const std::vector<int>& s) { return edge_boundary(g, make_set(g, s)); },
        py::arg("graph"), py::arg("s"));
  m.def("vertex_boundary",
        [](const Graph& g, const std::vector<int>& s) {
          return vertex_boundary(g, make_set(g, s)).members();
        },
        py::arg("graph"), py::arg("s"));
  m.def("edge_expansion",
        [](const Graph& g, const std::vector<int>& s) { return edge_expansion(g, make_set(g, s)); },
        py::arg("graph"), py::arg("s"));
  m.def("vertex_expansion",
        [](const Graph& g, const std::vector<int>& s) {
          return vertex_expansion(g, make_set(g, s));
        },
        py::arg("graph"), py::arg("s"));
  m.def("expansion_exact",
        [](const Graph& g, const std::vector<int>& s, const std::string& mode) {
          Rational e = expansion_exact(g, make_set(g, s), mode_from_name(mode));
          return std::make_pair(e.num, e.den);
        },
        py::arg("graph"), py::arg("s"), py::arg("mode"));
  m.def("kway_expansion",
        [](const Graph& g, const std::vector<std::vector<int>>& parts, const std::string& mode) {
          auto rep = kway_expansion(g, make_sets(g, parts), mode_from_name(mode));
          return std::make_pair(rep.max_value, rep.per_part);
        },
        py::arg("graph"), py::arg("parts"), py::arg("mode"));
  m.def("spectral_gap",
        [](const Graph& g) {
          SpectralReport rep = spectral_gap(g);
          py::dict d;
          d["lambda2"] = rep.lambda2;
          d["method"] = rep.method;
          d["residual"] = rep.residual;
          return d;
        },
        py::arg("graph"));

  m.def("generate_edge_instance",
        [](int n, int k, double eps, double lambda_min, int d, double r, std::uint64_t seed,
           const std::string& adversary, int cross_edges) {
          return gen_kpart_edge(params_from_args(n, k, eps, lambda_min, d, r, seed, adversary,
                                                 cross_edges, "matching", -1));
        },
        py::arg("n"), py::arg("k"), py::arg("eps"), py::arg("lambda_min"), py::arg("d"),
        py::arg("r") = 1.0, py::arg("seed") = 0, py::arg("adversary") = "none",
        py::arg("cross_edges") = -1);
  m.def("generate_vertex_instance",
        [](int n, int k, double eps, double lambda_min, int d, double r, std::uint64_t seed,
           const std::string& adversary, const std::string& portal_wiring, int portal_edges) {
          return gen_kpart_vertex(params_from_args(n, k, eps, lambda_min, d, r, seed, adversary,
                                                   -1, portal_wiring, portal_edges));
        },
        py::arg("n"), py::arg("k"), py::arg("eps"), py::arg("lambda_min"), py::arg("d"),
        py::arg("r") = 1.0, py::arg("seed") = 0, py::arg("adversary") = "none",
        py::arg("portal_wiring") = "matching", py::arg("portal_edges") = -1);
  m.def("gen_regular_expander", &gen_regular_expander, py::arg("m"), py::arg("d"),
        py::arg("lambda_min"), py::arg("r") = 1.0, py::arg("seed") = 0);
  m.def("apply_monotone_adversary",
        [](const PlantedInstance& inst, const std::string& policy, std::uint64_t seed) {
          return apply_monotone_adversary(inst, AdversaryPolicy::parse(policy), seed);
        },
        py::arg("instance"), py::arg("policy"), py::arg("seed") = 0);
  m.def("validate_instance",
        [](const PlantedInstance& inst) { return validation_dict(validate_instance(inst)); },
        py::arg("instance"));

  m.def("integral_embedding", &integral_embedding, py::arg("instance"));
  m.def("solve",
        [](const PlantedInstance& inst, int rank, double tol, int max_outer, int max_inner,
           double growth, int triangle_budget, std::uint64_t seed, bool warm_start) {
          RelaxationSpec spec = build_relaxation(inst.graph, inst.params.k, inst.mode);
          SolverConfig cfg =
              solver_config(rank, tol, max_outer, max_inner, growth, triangle_budget, seed);
          if (warm_start) return solve(spec, cfg, integral_embedding(inst).vectors);
          return solve(spec, cfg);
        },
        py::arg("instance"), py::arg("rank") = 0, py::arg("tol") = 1e-4,
        py::arg("max_outer") = 60, py::arg("max_inner") = 500, py::arg("growth") = 3.0,
        py::arg("triangle_budget") = 2000, py::arg("seed") = 0, py::arg("warm_start") = false);
  m.def("solve_graph",
        [](const Graph& g, int k, const std::string& mode, int rank, double tol, int max_outer,
           int max_inner, double growth, int triangle_budget, std::uint64_t seed) {
          RelaxationSpec spec = build_relaxation(g, k, mode_from_name(mode));
          return solve(spec, solver_config(rank, tol, max_outer, max_inner, growth,
                                           triangle_budget, seed));
        },
        py::arg("graph"), py::arg("k"), py::arg("mode"), py::arg("rank") = 0,
        py::arg("tol") = 1e-4, py::arg("max_outer") = 60, py::arg("max_inner") = 500,
        py::arg("growth") = 3.0, py::arg("triangle_budget") = 2000, py::arg("seed") = 0);
  m.def("check_feasibility",
        [](const EmbeddingSolution& sol, const Graph& g, int k) {
          return residuals_dict(check_feasibility(sol, build_relaxation(g, k, sol.mode)));
        },
        py::arg("solution"), py::arg("graph"), py::arg("k"));
  m.def("separate_triangles",
        [](const EmbeddingSolution& sol, int budget, double tol, std::uint64_t seed) {
          std::vector<std::tuple<int, int, int, double>> out;
          for (const auto& t : separate_triangles(sol, budget, tol, seed))
            out.emplace_back(t.i, t.j, t.k, t.violation);
          return out;
        },
        py::arg("solution"), py::arg("budget"), py::arg("tol") = 1e-4, py::arg("seed") = 0);

  m.def("ball",
        [](const EmbeddingSolution& sol, int center, double radius) {
          return ball(sol, center, radius).members();
        },
        py::arg("solution"), py::arg("center"), py::arg("radius"));
  m.def("round_greedy",
        [](const EmbeddingSolution& sol, const Graph& g, int k, const std::string& mode,
           double size_floor) {
          return round_greedy(sol, g, k, mode_from_name(mode), size_floor);
        },
        py::arg("solution"), py::arg("graph"), py::arg("k"), py::arg("mode"),
        py::arg("size_floor") = -1.0);
  m.def("threshold_cut_l1",
        [](const EmbeddingSolution& sol, const Graph& g, int i0, const std::string& mode) {
          auto [w, e] = threshold_cut_l1(sol, g, i0, mode_from_name(mode));
          return std::make_pair(w.members(), e);
        },
        py::arg("solution"), py::arg("graph"), py::arg("i0"), py::arg("mode"));
  m.def("complete_partition",
        [](const PartitionResult& res, const Graph& g, const std::string& mode) {
          return complete_partition(res, g, mode_from_name(mode));
        },
        py::arg("result"), py::arg("graph"), py::arg("mode"));
  m.def("cluster_diagnostics",
        [](const EmbeddingSolution& sol, const PlantedInstance& inst) {
          return diagnostics_dict(cluster_diagnostics(sol, inst));
        },
        py::arg("solution"), py::arg("instance"));
  m.def("centroid_identity_check",
        [](const std::vector<Eigen::VectorXd>& points) {
          return centroid_identity_check(points);
        },
        py::arg("points"));
  m.def("poincare_check",
        [](const Graph& g, const std::vector<double>& x, double lambda, int d, double r) {
          PoincareReport rep = poincare_check(g, x, lambda, d, r);
          return std::make_tuple(rep.lhs, rep.rhs_ordered, rep.rhs_unordered);
        },
        py::arg("graph"), py::arg("x"), py::arg("lam"), py::arg("d"), py::arg("r") = 1.0);

  m.def("brute_kway_opt",
        [](const Graph& g, int k, const std::string& mode) {
          OracleResult res = brute_kway_opt(g, k, mode_from_name(mode));
          py::dict d;
          d["opt"] = res.opt.to_double();
          d["opt_num"] = res.opt.num;
          d["opt_den"] = res.opt.den;
          std::vector<std::vector<int>> argmin;
          for (const auto& s : res.argmin) argmin.push_back(s.members());
          d["argmin"] = argmin;
          d["candidates"] = res.candidates;
          return d;
        },
        py::arg("graph"), py::arg("k"), py::arg("mode"));
  m.def("naive_expansion",
        [](const Graph& g, const std::vector<int>& s, const std::string& mode) {
          Rational e = naive_expansion(g, make_set(g, s), mode_from_name(mode));
          return std::make_pair(e.num, e.den);
        },
        py::arg("graph"), py::arg("s"), py::arg("mode"));

  m.def("save_instance",
        [](const PlantedInstance& inst, const std::string& path) {
          write_file(path, instance_to_json(inst));
        },
        py::arg("instance"), py::arg("path"));
  m.def("load_instance",
        [](const std::string& path) { return instance_from_json(read_file(path)); },
        py::arg("path"));
  m.def("save_embedding",
        [](const EmbeddingSolution& sol, const std::string& path) {
          write_file(path, write_embedding(sol));
        },
        py::arg("solution"), py::arg("path"));
  m.def("load_embedding",
        [](const std::string& path) { return read_embedding(read_file(path)); },
        py::arg("path"));
  m.def("write_edge_list", &write_edge_list, py::arg("graph"));
  m.def("read_edge_list", &read_edge_list, py::arg("text"));
  m.def("run_experiment",
        [](const std::string& config_json, const std::string& out_dir) {
          ExperimentConfig cfg = ExperimentConfig::from_json(config_json);
          if (!out_dir.empty()) cfg.out_dir = out_dir;
          ExperimentOutput out = run_experiment(cfg);
          write_experiment(out, cfg.out_dir);
          return out.csv;
        },
        py::arg("config_json"), py::arg("out_dir") = "");

  m.attr("__version__") = "0.1.0";
}
