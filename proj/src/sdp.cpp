#include "kpart/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>
#include <unordered_set>

#include "kpart/errors.hpp"
#include "kpart/rng.hpp"

namespace kpart {

std::string RelaxationSpec::objective_description() const {
  if (mode == Mode::Edge) return "(1/2) sum_{ij in E} (U_ii + U_jj - 2 U_ij)";
  return "sum_i eta_i with eta_i >= U_ii + U_jj - 2 U_ij for j in N(i)";
}

RelaxationSpec build_relaxation(const Graph& g, int k, Mode mode) {
  if (k < 2) throw ValidationError("k must be at least 2");
  return RelaxationSpec{g, k, mode};
}

double ResidualReport::worst() const {
  return std::max({diagonal, nonneg, rowsum, triangle, eta});
}

double objective_value(const RelaxationSpec& spec, const Eigen::MatrixXd& y) {
  const Graph& g = spec.graph;
  if (spec.mode == Mode::Edge) {
    double total = 0.0;
    for (const auto& [u, v] : g.edges()) total += (y.row(u) - y.row(v)).squaredNorm();
    return 0.5 * total;
  }
  double total = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    double worst = 0.0;
    for (int j : g.neighbors(i)) worst = std::max(worst, (y.row(i) - y.row(j)).squaredNorm());
    total += worst;
  }
  return total;
}

namespace detail {

double PenaltyModel::value(const Eigen::MatrixXd& y) const {
  double f = objective_value(*spec, y);

  Eigen::MatrixXd gram = y * y.transpose();
  Eigen::VectorXd h = gram.rowwise().sum().array() - row_target;
  f += multipliers.dot(h) + 0.5 * rho_eq * h.squaredNorm();

  Eigen::MatrixXd viol = (-gram).cwiseMax(0.0);
  f += 0.5 * rho_neg * viol.squaredNorm();

  for (const auto& [a, b, c] : triangles) {
    double v = (y.row(a) - y.row(c)).squaredNorm() - (y.row(a) - y.row(b)).squaredNorm() -
               (y.row(c) - y.row(b)).squaredNorm();
    if (v > 0) f += 0.5 * rho_tri * v * v;
  }
  return f;
}

double PenaltyModel::value_and_grad(const Eigen::MatrixXd& y, Eigen::MatrixXd& grad) const {
  const Graph& g = spec->graph;
  const int n = static_cast<int>(y.rows());
  grad.setZero(y.rows(), y.cols());
  double f = 0.0;

  if (spec->mode == Mode::Edge) {
    for (const auto& [u, v] : g.edges()) {
      Eigen::RowVectorXd diff = y.row(u) - y.row(v);
      f += 0.5 * diff.squaredNorm();
      grad.row(u) += diff;
      grad.row(v) -= diff;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      int best = -1;
      double worst = -1.0;
      for (int j : g.neighbors(i)) {
        double d = (y.row(i) - y.row(j)).squaredNorm();
        if (d > worst + 1e-15) {  // ties break to the lowest neighbor id
          worst = d;
          best = j;
        }
      }
      if (best < 0) continue;
      f += worst;
      Eigen::RowVectorXd diff = y.row(i) - y.row(best);
      grad.row(i) += 2.0 * diff;
      grad.row(best) -= 2.0 * diff;
    }
  }

  Eigen::MatrixXd gram(n, n);
  gram.noalias() = y * y.transpose();
  Eigen::VectorXd h = gram.rowwise().sum().array() - row_target;
  f += multipliers.dot(h) + 0.5 * rho_eq * h.squaredNorm();
  Eigen::VectorXd coef = multipliers + rho_eq * h;
  Eigen::RowVectorXd col_sum = y.colwise().sum();
  Eigen::RowVectorXd weighted = coef.transpose() * y;
  grad.noalias() += coef * col_sum;
  grad.rowwise() += weighted;

  Eigen::MatrixXd viol = (-gram).cwiseMax(0.0);
  f += 0.5 * rho_neg * viol.squaredNorm();
  grad.noalias() -= 2.0 * rho_neg * (viol * y);

  for (const auto& [a, b, c] : triangles) {
    double v = (y.row(a) - y.row(c)).squaredNorm() - (y.row(a) - y.row(b)).squaredNorm() -
               (y.row(c) - y.row(b)).squaredNorm();
    if (v <= 0) continue;
    f += 0.5 * rho_tri * v * v;
    double common = 2.0 * rho_tri * v;
    grad.row(a) += common * (y.row(b) - y.row(c));
    grad.row(c) += common * (y.row(b) - y.row(a));
    grad.row(b) += common * (y.row(a) + y.row(c) - 2.0 * y.row(b));
  }
  return f;
}

}  // namespace detail

namespace {

void normalize_rows(Eigen::MatrixXd& y) {
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    double norm = y.row(i).norm();
    if (norm > 0) y.row(i) /= norm;
  }
}

Eigen::MatrixXd riemannian(const Eigen::MatrixXd& y, const Eigen::MatrixXd& grad) {
  Eigen::MatrixXd out = grad;
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    out.row(i) -= grad.row(i).dot(y.row(i)) * y.row(i);
  return out;
}

// Projected descent with BB steps and Armijo backtracking; rows stay on the
// unit sphere via per-step renormalization.
double minimize_inner(const detail::PenaltyModel& model, Eigen::MatrixXd& y, int max_steps,
                      double grad_tol, long long& inner_iters) {
  Eigen::MatrixXd grad;
  double f = model.value_and_grad(y, grad);
  Eigen::MatrixXd rgrad = riemannian(y, grad);
  double alpha = 1.0 / (1.0 + rgrad.norm());
  Eigen::MatrixXd prev_y, prev_rgrad;
  bool have_prev = false;

  for (int step = 0; step < max_steps; ++step) {
    double gnorm = rgrad.norm();
    if (gnorm <= grad_tol) break;
    if (have_prev) {
      Eigen::MatrixXd dy = y - prev_y;
      Eigen::MatrixXd dg = rgrad - prev_rgrad;
      double denom = (dy.array() * dg.array()).sum();
      double numer = dy.squaredNorm();
      if (denom > 1e-16 * numer) alpha = numer / denom;
      alpha = std::clamp(alpha, 1e-10, 1e3);
    }
    bool accepted = false;
    double trial_alpha = alpha;
    for (int bt = 0; bt < 40; ++bt) {
      Eigen::MatrixXd trial = y - trial_alpha * rgrad;
      normalize_rows(trial);
      double ftrial = model.value(trial);
      if (ftrial <= f - 1e-4 * trial_alpha * gnorm * gnorm) {
        prev_y = y;
        prev_rgrad = rgrad;
        have_prev = true;
        y = trial;
        f = model.value_and_grad(y, grad);
        rgrad = riemannian(y, grad);
        accepted = true;
        break;
      }
      trial_alpha *= 0.5;
    }
    ++inner_iters;
    if (!accepted) break;
  }
  return f;
}

std::uint64_t triple_key(int i, int j, int k, int n) {
  if (i > k) std::swap(i, k);
  return (static_cast<std::uint64_t>(i) * n + j) * n + k;
}

struct RankedTriple {
  double violation;
  int i, j, k;
  bool operator<(const RankedTriple& o) const {
    if (violation != o.violation) return violation > o.violation;  // min-heap by violation
    return std::tie(i, j, k) < std::tie(o.i, o.j, o.k);
  }
};

std::vector<TriangleViolation> separate_on_matrix(const Eigen::MatrixXd& y, int budget,
                                                  double tol, std::uint64_t seed) {
  const int n = static_cast<int>(y.rows());
  if (n < 3 || budget <= 0) return {};
  Eigen::MatrixXd gram = y * y.transpose();
  auto dist = [&](int i, int j) { return gram(i, i) + gram(j, j) - 2.0 * gram(i, j); };

  std::priority_queue<RankedTriple> heap;  // keeps the `budget` worst violations
  auto offer = [&](int i, int j, int k) {
    double v = dist(i, k) - dist(i, j) - dist(k, j);
    if (v <= tol) return;
    if (i > k) std::swap(i, k);
    heap.push({v, i, j, k});
    if (static_cast<int>(heap.size()) > budget) heap.pop();
  };

  if (n <= 120) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        for (int k = i + 1; k < n; ++k) {
          if (k == j) continue;
          offer(i, j, k);
        }
      }
  } else {
    constexpr int kNear = 20;
    std::vector<std::vector<int>> nearest(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
      order.clear();
      for (int j = 0; j < n; ++j)
        if (j != i) order.push_back(j);
      std::partial_sort(order.begin(), order.begin() + std::min<int>(kNear, n - 1), order.end(),
                        [&](int a, int b) { return dist(i, a) < dist(i, b); });
      order.resize(std::min<int>(kNear, n - 1));
      nearest[i] = order;
    }
    Rng rng(seed ^ 0xabcdef12345ULL);
    const long long samples = 16LL * budget + 4096;
    std::unordered_set<std::uint64_t> seen;
    for (long long s = 0; s < samples; ++s) {
      int i = rng.index(n), k = rng.index(n);
      if (i == k) continue;
      for (int j : nearest[i]) {
        if (j == k) continue;
        if (seen.insert(triple_key(i, j, k, n)).second) offer(i, j, k);
      }
      for (int j : nearest[k]) {
        if (j == i) continue;
        if (seen.insert(triple_key(i, j, k, n)).second) offer(i, j, k);
      }
    }
  }

  std::vector<TriangleViolation> out;
  std::unordered_set<std::uint64_t> unique;
  while (!heap.empty()) {
    auto t = heap.top();
    heap.pop();
    if (unique.insert(triple_key(t.i, t.j, t.k, n)).second)
      out.push_back({t.i, t.j, t.k, t.violation});
  }
  std::sort(out.begin(), out.end(), [](const TriangleViolation& a, const TriangleViolation& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });
  return out;
}

// When `worst` is given, also collects up to `worst_budget` triples violating
// by more than `worst_tol` (the exact scan sees triples the sampled separator
// can miss, e.g. a single vertex pulled off its cluster by a cross edge).
ResidualReport residuals_on_matrix(const Eigen::MatrixXd& y, const RelaxationSpec& spec,
                                   const std::vector<double>* eta,
                                   std::vector<TriangleViolation>* worst = nullptr,
                                   int worst_budget = 0, double worst_tol = 0.0) {
  const int n = static_cast<int>(y.rows());
  std::priority_queue<RankedTriple> heap;
  auto collect = [&](int i, int j, int k, double v) {
    if (worst == nullptr || v <= worst_tol) return;
    if (i > k) std::swap(i, k);
    heap.push({v, i, j, k});
    if (static_cast<int>(heap.size()) > worst_budget) heap.pop();
  };
  ResidualReport rep;
  Eigen::MatrixXd gram = y * y.transpose();
  for (int i = 0; i < n; ++i)
    rep.diagonal = std::max(rep.diagonal, std::abs(gram(i, i) - 1.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) rep.nonneg = std::max(rep.nonneg, -gram(i, j));
  rep.nonneg = std::max(rep.nonneg, 0.0);
  const double target = spec.row_target();
  for (int i = 0; i < n; ++i)
    rep.rowsum = std::max(rep.rowsum, std::abs(gram.row(i).sum() - target) / n);

  Eigen::VectorXd diag = gram.diagonal();
  Eigen::MatrixXd dist =
      (diag.replicate(1, n) + diag.transpose().replicate(n, 1) - 2.0 * gram).cwiseMax(0.0);
  if (n <= 400) {
    rep.triangle_exact = true;
    const double* d = dist.data();  // column-major, symmetric so (i,j) = d[i + j*n]
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        double dij = d[i + static_cast<std::ptrdiff_t>(j) * n];
        for (int k = i + 1; k < n; ++k) {
          if (k == j) continue;
          double v = d[i + static_cast<std::ptrdiff_t>(k) * n] - dij -
                     d[k + static_cast<std::ptrdiff_t>(j) * n];
          if (v > rep.triangle) rep.triangle = v;
          if (worst != nullptr && v > worst_tol) collect(i, j, k, v);
          ++rep.triangles_checked;
        }
      }
  } else {
    rep.triangle_exact = false;
    Rng rng(0x7ea51deULL);
    for (long long s = 0; s < 1000000; ++s) {
      int i = rng.index(n), j = rng.index(n), k = rng.index(n);
      if (i == j || j == k || i == k) continue;
      double v = dist(i, k) - dist(i, j) - dist(k, j);
      if (v > rep.triangle) rep.triangle = v;
      if (worst != nullptr && v > worst_tol) collect(i, j, k, v);
      ++rep.triangles_checked;
    }
  }
  if (worst != nullptr) {
    while (!heap.empty()) {
      auto t = heap.top();
      heap.pop();
      worst->push_back({t.i, t.j, t.k, t.violation});
    }
  }

  if (spec.mode == Mode::Vertex && eta != nullptr && !eta->empty()) {
    for (int i = 0; i < n; ++i) {
      double worst = 0.0;
      for (int j : spec.graph.neighbors(i)) worst = std::max(worst, dist(i, j));
      rep.eta = std::max(rep.eta, std::abs((*eta)[i] - worst));
    }
  }
  return rep;
}

std::vector<double> eta_from_vectors(const Graph& g, const Eigen::MatrixXd& y) {
  std::vector<double> eta(g.n(), 0.0);
  for (int i = 0; i < g.n(); ++i) {
    double worst = 0.0;
    for (int j : g.neighbors(i)) worst = std::max(worst, (y.row(i) - y.row(j)).squaredNorm());
    eta[i] = worst;
  }
  return eta;
}

}  // namespace

EmbeddingSolution integral_embedding(const PlantedInstance& inst) {
  const int n = inst.graph.n();
  const int k = static_cast<int>(inst.parts.size());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, k);
  for (int t = 0; t < k; ++t)
    for (int v : inst.parts[t].members()) y(v, t) = 1.0;
  EmbeddingSolution sol;
  sol.vectors = y;
  sol.mode = inst.mode;
  sol.k = k;
  RelaxationSpec spec{inst.graph, k, inst.mode};
  sol.objective = objective_value(spec, y);
  if (inst.mode == Mode::Vertex) sol.eta = eta_from_vectors(inst.graph, y);
  sol.residuals = residuals_on_matrix(y, spec, &sol.eta);
  sol.trace.converged = true;
  return sol;
}

std::vector<TriangleViolation> separate_triangles(const EmbeddingSolution& sol, int budget,
                                                  double tol, std::uint64_t seed) {
  return separate_on_matrix(sol.vectors, budget, tol, seed);
}

ResidualReport check_feasibility(const EmbeddingSolution& sol, const RelaxationSpec& spec) {
  return residuals_on_matrix(sol.vectors, spec, &sol.eta);
}

EmbeddingSolution solve(const RelaxationSpec& spec, const SolverConfig& cfg) {
  return solve(spec, cfg, Eigen::MatrixXd());
}

EmbeddingSolution solve(const RelaxationSpec& spec, const SolverConfig& cfg,
                        const Eigen::MatrixXd& warm_start) {
  const int n = spec.graph.n();
  const int k = spec.k;
  if (k > n)
    throw InfeasibleError("k = " + std::to_string(k) + " > n = " + std::to_string(n) +
                          ": unit diagonal forces every row sum >= 1 > n/k");
  if (cfg.tau_feas <= 0 || cfg.tau_feas > 1e-2)
    throw ValidationError("tau_feas must lie in (0, 1e-2]");

  int p = cfg.rank > 0 ? cfg.rank
                       : std::max(k + 2, static_cast<int>(std::ceil(std::sqrt(2.0 * n))));
  p = std::max(p, k);

  Eigen::MatrixXd y(n, p);
  if (warm_start.size() > 0) {
    y.setZero();
    const int cols = std::min<int>(p, static_cast<int>(warm_start.cols()));
    y.leftCols(cols) = warm_start.leftCols(cols);
  } else {
    Rng rng(Rng::mix(cfg.seed, 0xe3bedULL));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) y(i, j) = rng.unit() - 0.5;
  }
  normalize_rows(y);

  detail::PenaltyModel model;
  model.spec = &spec;
  model.row_target = spec.row_target();
  model.multipliers = Eigen::VectorXd::Zero(n);
  model.rho_eq = 1e-2;
  model.rho_neg = 1e-1;
  model.rho_tri = 1.0;

  // The max-over-neighbors objective gives weak subgradients while the
  // embedding is still diffuse; vertex-mode cold starts first cluster under
  // the edge objective, then refine on the true one. Constraints are the
  // same in both phases, so multipliers and active triangles carry over.
  RelaxationSpec edge_view = spec;
  edge_view.mode = Mode::Edge;
  bool homotopy = spec.mode == Mode::Vertex && warm_start.size() == 0;
  if (homotopy) model.spec = &edge_view;
  const int homotopy_cap = 20;

  std::unordered_set<std::uint64_t> active_keys;
  SolverTrace trace;
  ResidualReport resid;
  double prev_eq = std::numeric_limits<double>::infinity();
  double prev_neg = std::numeric_limits<double>::infinity();
  double prev_tri = std::numeric_limits<double>::infinity();
  const double growth = cfg.penalty_growth;
  const double rho_cap = 1e9;

  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    double grad_tol = std::max(1e-9 * n, 1e-4 * n * std::pow(0.5, outer));
    minimize_inner(model, y, cfg.max_inner, grad_tol, trace.inner_iters);
    trace.outer_iters = outer + 1;

    std::vector<TriangleViolation> audit;
    resid = residuals_on_matrix(y, spec, nullptr, &audit, cfg.triangle_budget, cfg.tau_feas);
    auto violations =
        separate_on_matrix(y, cfg.triangle_budget, cfg.tau_feas, Rng::mix(cfg.seed, outer));
    violations.insert(violations.end(), audit.begin(), audit.end());
    for (const auto& t : violations)
      if (active_keys.insert(triple_key(t.i, t.j, t.k, n)).second)
        model.triangles.push_back({t.i, t.j, t.k});
    trace.active_triangles = static_cast<int>(model.triangles.size());

    if (resid.within(cfg.tau_feas) && violations.empty()) {
      if (homotopy) {
        homotopy = false;
        model.spec = &spec;
      } else {
        trace.converged = true;
        break;
      }
    } else if (homotopy && outer + 1 >= homotopy_cap) {
      homotopy = false;
      model.spec = &spec;
    }

    Eigen::MatrixXd gram = y * y.transpose();
    Eigen::VectorXd h = gram.rowwise().sum().array() - model.row_target;
    model.multipliers += model.rho_eq * h;

    double eq_res = h.cwiseAbs().maxCoeff() / n;
    if (eq_res > cfg.tau_feas && eq_res > 0.25 * prev_eq)
      model.rho_eq = std::min(model.rho_eq * growth, rho_cap);
    prev_eq = eq_res;
    if (resid.nonneg > cfg.tau_feas && resid.nonneg > 0.25 * prev_neg)
      model.rho_neg = std::min(model.rho_neg * growth, rho_cap);
    prev_neg = resid.nonneg;
    if (resid.triangle > cfg.tau_feas && resid.triangle > 0.25 * prev_tri)
      model.rho_tri = std::min(model.rho_tri * growth, rho_cap);
    prev_tri = resid.triangle;
  }

  EmbeddingSolution sol;
  sol.vectors = y;
  sol.mode = spec.mode;
  sol.k = k;
  sol.objective = objective_value(spec, y);
  if (spec.mode == Mode::Vertex) sol.eta = eta_from_vectors(spec.graph, y);
  sol.residuals = residuals_on_matrix(y, spec, &sol.eta);
  sol.trace = trace;
  return sol;
}

}  // namespace kpart
