#include "kpart/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kpart/errors.hpp"

namespace kpart {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

ordered_json edges_to_json(const std::vector<Edge>& edges) {
  ordered_json out = ordered_json::array();
  for (const auto& [u, v] : edges) out.push_back(ordered_json::array({u, v}));
  return out;
}

std::vector<Edge> edges_from_json(const ordered_json& j) {
  std::vector<Edge> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return out;
}

ordered_json sets_to_json(const std::vector<VertexSet>& sets) {
  ordered_json out = ordered_json::array();
  for (const auto& s : sets) out.push_back(s.members());
  return out;
}

std::vector<VertexSet> sets_from_json(const ordered_json& j, int n) {
  std::vector<VertexSet> out;
  for (const auto& s : j) out.push_back(VertexSet::of(s.get<std::vector<int>>(), n));
  return out;
}

}  // namespace

std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n() << " " << g.m() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
  return out.str();
}

Graph read_edge_list(const std::string& text) {
  std::istringstream in(text);
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("edge list: failed to read 'n m' header");
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i) {
    int u = 0, v = 0;
    if (!(in >> u >> v))
      throw ParseError("edge list: failed to read edge " + std::to_string(i + 1) + " of " +
                       std::to_string(m));
    edges.emplace_back(u, v);
  }
  return Graph::build(n, edges);
}

std::string instance_to_json(const PlantedInstance& inst) {
  ordered_json j;
  j["format"] = "kpart-instance-v1";
  j["mode"] = mode_name(inst.mode);
  ordered_json params;
  params["n"] = inst.params.n;
  params["k"] = inst.params.k;
  params["eps"] = inst.params.eps;
  params["lambda_min"] = inst.params.lambda_min;
  params["d"] = inst.params.d;
  params["r"] = inst.params.r;
  params["seed"] = inst.params.seed;
  params["cross_edges"] = inst.params.cross_edges;
  params["portal_wiring"] = portal_wiring_name(inst.params.portal_wiring);
  params["portal_edges"] = inst.params.portal_edges;
  params["adversary"] = inst.params.adversary.str();
  j["params"] = params;
  j["parts"] = sets_to_json(inst.parts);
  j["t_sets"] = sets_to_json(inst.t_sets);
  j["achieved_lambda"] = inst.achieved_lambda;
  j["lambda_post_adversary"] = inst.lambda_post_adversary;
  j["adversary_edges"] = edges_to_json(inst.adversary_edges);
  j["cross_edges"] = edges_to_json(inst.cross_edges);
  ordered_json graph;
  graph["n"] = inst.graph.n();
  graph["edges"] = edges_to_json(inst.graph.edges());
  j["graph"] = graph;
  return j.dump(2) + "\n";
}

PlantedInstance instance_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("instance file: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "kpart-instance-v1")
      throw ParseError("instance file: unknown format tag");
    PlantedInstance inst;
    inst.mode = mode_from_name(j.at("mode").get<std::string>());
    const auto& params = j.at("params");
    inst.params.n = params.at("n").get<int>();
    inst.params.k = params.at("k").get<int>();
    inst.params.eps = params.at("eps").get<double>();
    inst.params.lambda_min = params.at("lambda_min").get<double>();
    inst.params.d = params.at("d").get<int>();
    inst.params.r = params.at("r").get<double>();
    inst.params.seed = params.at("seed").get<std::uint64_t>();
    inst.params.cross_edges = params.at("cross_edges").get<int>();
    inst.params.portal_wiring =
        portal_wiring_from_name(params.at("portal_wiring").get<std::string>());
    inst.params.portal_edges = params.at("portal_edges").get<int>();
    inst.params.adversary = AdversaryPolicy::parse(params.at("adversary").get<std::string>());
    const int n = j.at("graph").at("n").get<int>();
    inst.parts = sets_from_json(j.at("parts"), n);
    inst.t_sets = sets_from_json(j.at("t_sets"), n);
    inst.achieved_lambda = j.at("achieved_lambda").get<std::vector<double>>();
    inst.lambda_post_adversary = j.at("lambda_post_adversary").get<std::vector<double>>();
    inst.adversary_edges = edges_from_json(j.at("adversary_edges"));
    inst.cross_edges = edges_from_json(j.at("cross_edges"));
    inst.graph = Graph::build(n, edges_from_json(j.at("graph").at("edges")));
    return inst;
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("instance file: ") + e.what());
  }
}

std::string write_embedding(const EmbeddingSolution& sol) {
  std::ostringstream out;
  out << "kpart-embedding-v1\n";
  out << "n " << sol.n() << "\n";
  out << "p " << sol.p() << "\n";
  out << "mode " << mode_name(sol.mode) << "\n";
  out << "k " << sol.k << "\n";
  out << "objective " << fmt17(sol.objective) << "\n";
  out << "converged " << (sol.trace.converged ? 1 : 0) << "\n";
  out << "residual_diagonal " << fmt17(sol.residuals.diagonal) << "\n";
  out << "residual_nonneg " << fmt17(sol.residuals.nonneg) << "\n";
  out << "residual_rowsum " << fmt17(sol.residuals.rowsum) << "\n";
  out << "residual_triangle " << fmt17(sol.residuals.triangle) << "\n";
  out << "residual_eta " << fmt17(sol.residuals.eta) << "\n";
  for (int i = 0; i < sol.n(); ++i) {
    for (int j = 0; j < sol.p(); ++j) {
      if (j) out << " ";
      out << fmt17(sol.vectors(i, j));
    }
    out << "\n";
  }
  return out.str();
}

EmbeddingSolution read_embedding(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line))
      throw ParseError("embedding file: unexpected end of file after line " +
                       std::to_string(line_no));
    ++line_no;
    return line;
  };
  if (next_line() != "kpart-embedding-v1")
    throw ParseError("embedding file: line 1: bad magic, expected kpart-embedding-v1");

  EmbeddingSolution sol;
  int n = 0, p = 0;
  auto read_field = [&](const std::string& key) {
    next_line();
    std::istringstream ls(line);
    std::string name;
    std::string value;
    if (!(ls >> name >> value) || name != key)
      throw ParseError("embedding file: line " + std::to_string(line_no) + ": expected '" +
                       key + " <value>'");
    return value;
  };
  try {
    n = std::stoi(read_field("n"));
    p = std::stoi(read_field("p"));
    sol.mode = mode_from_name(read_field("mode"));
    sol.k = std::stoi(read_field("k"));
    sol.objective = std::stod(read_field("objective"));
    sol.trace.converged = std::stoi(read_field("converged")) != 0;
    sol.residuals.diagonal = std::stod(read_field("residual_diagonal"));
    sol.residuals.nonneg = std::stod(read_field("residual_nonneg"));
    sol.residuals.rowsum = std::stod(read_field("residual_rowsum"));
    sol.residuals.triangle = std::stod(read_field("residual_triangle"));
    sol.residuals.eta = std::stod(read_field("residual_eta"));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("embedding file: line " + std::to_string(line_no) +
                     ": malformed numeric value");
  }
  if (n < 0 || p <= 0)
    throw ParseError("embedding file: invalid dimensions n=" + std::to_string(n) +
                     " p=" + std::to_string(p));
  sol.vectors.resize(n, p);
  for (int i = 0; i < n; ++i) {
    next_line();
    std::istringstream ls(line);
    for (int j = 0; j < p; ++j) {
      double x;
      if (!(ls >> x))
        throw ParseError("embedding file: line " + std::to_string(line_no) + ": expected " +
                         std::to_string(p) + " coordinates");
      sol.vectors(i, j) = x;
    }
  }
  return sol;
}

std::string result_to_json(const PartitionResult& res) {
  ordered_json j;
  j["format"] = "kpart-result-v1";
  j["mode"] = mode_name(res.mode);
  j["requested_k"] = res.requested_k;
  j["completed"] = res.completed;
  j["partial"] = res.partial;
  j["diagnostic"] = res.diagnostic;
  ordered_json sets = ordered_json::array();
  for (std::size_t t = 0; t < res.sets.size(); ++t) {
    ordered_json s;
    s["size"] = res.sets[t].size();
    s["expansion"] = res.expansions[t];
    s["expansion_num"] = res.expansions_exact[t].num;
    s["expansion_den"] = res.expansions_exact[t].den;
    s["center"] = res.provenance[t].center;
    s["radius"] = res.provenance[t].radius;
    s["members"] = res.sets[t].members();
    sets.push_back(s);
  }
  j["sets"] = sets;
  return j.dump(2) + "\n";
}

PartitionResult result_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("result file: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "kpart-result-v1")
      throw ParseError("result file: unknown format tag");
    PartitionResult res;
    res.mode = mode_from_name(j.at("mode").get<std::string>());
    res.requested_k = j.at("requested_k").get<int>();
    res.completed = j.at("completed").get<bool>();
    res.partial = j.at("partial").get<bool>();
    res.diagnostic = j.at("diagnostic").get<std::string>();
    int n = 0;
    for (const auto& s : j.at("sets"))
      for (int v : s.at("members").get<std::vector<int>>()) n = std::max(n, v + 1);
    for (const auto& s : j.at("sets")) {
      res.sets.push_back(VertexSet::of(s.at("members").get<std::vector<int>>(), n));
      res.expansions.push_back(s.at("expansion").get<double>());
      res.expansions_exact.push_back(
          Rational{s.at("expansion_num").get<std::int64_t>(),
                   s.at("expansion_den").get<std::int64_t>()});
      res.provenance.push_back({s.at("center").get<int>(), s.at("radius").get<double>()});
    }
    return res;
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("result file: ") + e.what());
  }
}

std::string diagnostics_to_text(const DiagnosticsReport& rep) {
  std::ostringstream out;
  out << "diag.k = " << rep.k << "\n";
  out << "diag.eps_param = " << fmt17(rep.eps_param) << "\n";
  out << "diag.eps_effective = " << fmt17(rep.eps_effective) << "\n";
  out << "diag.lambda_used = " << fmt17(rep.lambda_used) << "\n";
  out << "diag.bound = " << fmt17(rep.bound) << "\n";
  for (int t = 0; t < rep.k; ++t) {
    out << "diag.part" << t << ".mean_sq_deviation = " << fmt17(rep.mean_sq_deviation[t])
        << "\n";
    out << "diag.part" << t << ".centroid_norm_sq = " << fmt17(rep.centroid_norm_sq[t])
        << "\n";
    out << "diag.part" << t << ".core_size = " << rep.core_size[t] << "\n";
    out << "diag.part" << t << ".core_overlap = " << rep.core_overlap[t] << "\n";
    out << "diag.part" << t << ".core_diameter = " << fmt17(rep.core_diameter[t]) << "\n";
  }
  for (int t = 0; t < rep.k; ++t)
    for (int s = t + 1; s < rep.k; ++s) {
      out << "diag.pair" << t << "_" << s << ".inner = " << fmt17(rep.centroid_inner(t, s))
          << "\n";
      out << "diag.pair" << t << "_" << s << ".dist2 = " << fmt17(rep.centroid_dist2(t, s))
          << "\n";
      out << "diag.pair" << t << "_" << s
          << ".separation = " << fmt17(rep.core_separation(t, s)) << "\n";
    }
  out << "diag.pass.deviation = " << rep.pass_deviation << "\n";
  out << "diag.pass.norm = " << rep.pass_norm << "\n";
  out << "diag.pass.inner = " << rep.pass_inner << "\n";
  out << "diag.pass.distance = " << rep.pass_distance << "\n";
  out << "diag.pass.overlap = " << rep.pass_overlap << "\n";
  out << "diag.pass.separation = " << rep.pass_separation << "\n";
  out << "diag.pass.all = " << rep.all_pass() << "\n";
  return out.str();
}

std::string diagnostics_to_json(const DiagnosticsReport& rep) {
  ordered_json j;
  j["k"] = rep.k;
  j["eps_param"] = rep.eps_param;
  j["eps_effective"] = rep.eps_effective;
  j["lambda_used"] = rep.lambda_used;
  j["bound"] = rep.bound;
  j["mean_sq_deviation"] = rep.mean_sq_deviation;
  j["centroid_norm_sq"] = rep.centroid_norm_sq;
  ordered_json inner = ordered_json::array(), dist2 = ordered_json::array(),
               sep = ordered_json::array();
  for (int t = 0; t < rep.k; ++t) {
    ordered_json irow = ordered_json::array(), drow = ordered_json::array(),
                 srow = ordered_json::array();
    for (int s = 0; s < rep.k; ++s) {
      irow.push_back(rep.centroid_inner(t, s));
      drow.push_back(rep.centroid_dist2(t, s));
      srow.push_back(rep.core_separation(t, s));
    }
    inner.push_back(irow);
    dist2.push_back(drow);
    sep.push_back(srow);
  }
  j["centroid_inner"] = inner;
  j["centroid_dist2"] = dist2;
  j["core_separation"] = sep;
  j["core_size"] = rep.core_size;
  j["core_overlap"] = rep.core_overlap;
  j["core_diameter"] = rep.core_diameter;
  ordered_json pass;
  pass["deviation"] = rep.pass_deviation;
  pass["norm"] = rep.pass_norm;
  pass["inner"] = rep.pass_inner;
  pass["distance"] = rep.pass_distance;
  pass["overlap"] = rep.pass_overlap;
  pass["separation"] = rep.pass_separation;
  pass["all"] = rep.all_pass();
  j["pass"] = pass;
  return j.dump(2) + "\n";
}

std::string validation_to_text(const InstanceValidation& rep) {
  std::ostringstream out;
  out << "validate.lambda_min_measured = " << fmt17(rep.min_lambda) << "\n";
  out << "validate.lambda_certified = " << rep.lambda_certified << "\n";
  out << "validate.degree_min = " << rep.degree_min << "\n";
  out << "validate.degree_max = " << rep.degree_max << "\n";
  for (std::size_t t = 0; t < rep.per_part_lambda.size(); ++t)
    out << "validate.part" << t << ".lambda = " << fmt17(rep.per_part_lambda[t]) << "\n";
  for (std::size_t t = 0; t < rep.per_part_expansion.size(); ++t)
    out << "validate.part" << t << ".expansion = " << fmt17(rep.per_part_expansion[t]) << "\n";
  out << "validate.max_part_expansion = " << fmt17(rep.max_part_expansion) << "\n";
  out << "validate.model_bound = " << fmt17(rep.model_bound) << "\n";
  out << "validate.expansion_within_model = " << rep.expansion_within_model << "\n";
  out << "validate.premise_value = " << fmt17(rep.premise_value) << "\n";
  out << "validate.premise_holds = " << rep.premise_holds
      << (rep.premise_holds ? "" : "  # WARN: eps*k*r^3/lambda > 1/800") << "\n";
  out << "validate.integral_objective = " << fmt17(rep.integral_objective) << "\n";
  out << "validate.integral_bound = " << fmt17(rep.integral_bound) << "\n";
  out << "validate.integral_within_bound = " << rep.integral_within_bound << "\n";
  out << "validate.portal_confinement = " << rep.portal_confinement << "\n";
  out << "validate.all_ok = " << rep.all_ok() << "\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
}

}  // namespace kpart
