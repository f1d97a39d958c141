#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpart/graph.hpp"

namespace kpart {

// Intra-part edge additions applied as the last generation step. Policies can
// only densify parts; anything touching two parts is rejected.
struct AdversaryPolicy {
  enum class Kind { None, RandomIntra, CliqueWithinPart, ExplicitEdges };
  Kind kind = Kind::None;
  int count = 0;             // RandomIntra
  int part = 0;              // CliqueWithinPart
  int size = 0;              // CliqueWithinPart
  std::vector<Edge> edges;   // ExplicitEdges

  static AdversaryPolicy none() { return {}; }
  static AdversaryPolicy random_intra(int count);
  static AdversaryPolicy clique_within_part(int part, int size);
  static AdversaryPolicy explicit_edges(std::vector<Edge> edges);

  std::string str() const;
  // Accepts "none", "random_intra:COUNT", "clique:PART:SIZE".
  static AdversaryPolicy parse(const std::string& text);
};

enum class PortalWiring { Matching, Dense };

std::string portal_wiring_name(PortalWiring w);
PortalWiring portal_wiring_from_name(const std::string& name);

struct PlantedParams {
  int n = 0;
  int k = 2;
  double eps = 0.0;
  double lambda_min = 0.5;
  int d = 3;
  double r = 1.0;
  std::uint64_t seed = 0;
  AdversaryPolicy adversary;
  // Edge mode: target number of inter-part edges; -1 fills to the per-part cap.
  int cross_edges = -1;
  // Vertex mode: wiring policy over portal vertices and optional edge target.
  PortalWiring portal_wiring = PortalWiring::Matching;
  int portal_edges = -1;

  void validate() const;
};

struct PlantedInstance {
  Graph graph;
  Mode mode = Mode::Edge;
  std::vector<VertexSet> parts;
  std::vector<VertexSet> t_sets;  // vertex mode portal sets, one per part
  PlantedParams params;
  std::vector<double> achieved_lambda;        // pre-adversary per-part certificate
  std::vector<double> lambda_post_adversary;  // empty unless an adversary ran
  std::vector<Edge> adversary_edges;
  std::vector<Edge> cross_edges;  // inter-part edges

  int part_of(int v) const;
  // Induced subgraph on part t with adversary edges removed, relabeled to
  // 0..|S_t|-1. This is the graph the spectral certificate refers to.
  Graph pre_adversary_block(int t) const;
};

// Random d-regular graph (pairing model with legal-pair sampling and
// restarts), optionally densified up to degree r*d, resampled until the
// measured spectral gap reaches lambda_min; at most 50 attempts.
Graph gen_regular_expander(int m, int d, double lambda_min, double r, std::uint64_t seed);

PlantedInstance gen_kpart_edge(const PlantedParams& params);
PlantedInstance gen_kpart_vertex(const PlantedParams& params);

PlantedInstance apply_monotone_adversary(const PlantedInstance& inst,
                                         const AdversaryPolicy& policy, std::uint64_t seed);

struct InstanceValidation {
  std::vector<double> per_part_lambda;  // pre-adversary
  double min_lambda = 0.0;
  bool lambda_certified = false;  // min per-part lambda >= lambda_min
  int degree_min = 0;
  int degree_max = 0;
  std::vector<double> per_part_expansion;  // mode-matched, against the full graph
  double max_part_expansion = 0.0;
  double model_bound = 0.0;  // eps*r*d (edge) or eps*k (vertex)
  bool expansion_within_model = false;
  double premise_value = 0.0;  // eps*k*r^3 / min_lambda
  bool premise_holds = false;  // premise_value <= 1/800
  double integral_objective = 0.0;
  double integral_bound = 0.0;  // eps*r*d*n (edge) or 2*eps*n (vertex)
  bool integral_within_bound = false;
  bool portal_confinement = true;  // vertex mode only; true in edge mode
  bool all_ok() const;
};

InstanceValidation validate_instance(const PlantedInstance& inst);

}  // namespace kpart
