#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isocone/cone_model.hpp"
#include "isocone/config.hpp"
#include "isocone/errors.hpp"
#include "isocone/linalg.hpp"
#include "isocone/types.hpp"

namespace isocone {

/// Nearest point of a cone together with solver diagnostics.
struct ProjectionResult {
  EuclideanVector point;
  Method method = Method::exact;
  long iterations = 0;
  double residual = 0.0;           // max scaled constraint violation of point
  std::optional<double> kkt_gap;   // exact method only
  bool degenerate = false;         // exact method could not certify its answer
  std::string diagnostic;
};

/// Weighted isotonic regression instance: fit y under x_i <= x_j for every edge (i, j).
struct RegressionProblem {
  EuclideanVector y;
  WeightVector w;
  ConstraintGraph graph;

  RegressionProblem(EuclideanVector y_, WeightVector w_, ConstraintGraph graph_)
      : y(std::move(y_)), w(std::move(w_)), graph(std::move(graph_)) {
    require_same_dim(y.dim(), w.size(), "regression data vs weights");
    require_same_dim(y.dim(), graph.num_vertices(), "regression data vs graph");
  }
};

inline EuclideanVector project_orthant(const EuclideanVector& x) {
  return EuclideanVector(Eigen::VectorXd(x.coords().cwiseMax(0.0)));
}

inline EuclideanVector project_halfspace(const EuclideanVector& x, const HalfSpace& h) {
  require_same_dim(x.dim(), h.dim(), "project_halfspace");
  const Eigen::VectorXd& a = h.normal().coords();
  const double excess = a.dot(x.coords()) - h.offset();
  if (excess <= 0.0) return x;
  return EuclideanVector(Eigen::VectorXd(x.coords() - (excess / a.squaredNorm()) * a));
}

/// Exact projection. By Moreau's decomposition x = P_K x + P_{K°} x, where the
/// polar K° is spanned by the normals, so P_K x = x - A^T lambda with
/// lambda = argmin_{lambda >= 0} ||A^T lambda - x||. The NNLS optimality
/// conditions are exactly the KKT system of the projection; they are rechecked
/// on the returned point and reported in kkt_gap.
inline ProjectionResult project_exact(const PolyhedralCone& k, const EuclideanVector& x, const Config& cfg = {}) {
  require_same_dim(x.dim(), k.dim(), "project_exact");
  require_exact_dim(k.dim(), cfg.max_dim);
  if (k.empty()) return {x, Method::exact, 0, 0.0, 0.0, false, {}};

  const Eigen::MatrixXd a = k.normals_matrix();
  const auto sol = linalg::nnls(a.transpose(), x.coords());
  Eigen::VectorXd p = x.coords() - a.transpose() * sol.x;

  ProjectionResult res{EuclideanVector(p), Method::exact, sol.iterations, max_violation(k, p), 0.0, false, {}};
  const double dual_violation = std::max(0.0, -sol.x.minCoeff());
  const double orthogonality = std::abs((x.coords() - p).dot(p));
  res.kkt_gap = std::max(orthogonality, dual_violation);
  const double scale = 1.0 + x.coords().squaredNorm();
  if (!sol.converged || res.residual > cfg.tol * std::sqrt(scale) || *res.kkt_gap > cfg.tol * scale) {
    res.degenerate = true;
    res.diagnostic = "KKT conditions not certified within tolerance (residual " + std::to_string(res.residual) +
                     ", kkt gap " + std::to_string(*res.kkt_gap) + ")";
  }
  return res;
}

/// Dykstra's cyclic projection scheme with one correction vector per half-space.
/// Stops when no iterate moved by more than tol (max norm) during a full cycle
/// and the primal residual is at most tol.
inline ProjectionResult project_dykstra(const PolyhedralCone& k, const EuclideanVector& x, double tol = 1e-9,
                                        long max_iter = 100000) {
  require_same_dim(x.dim(), k.dim(), "project_dykstra");
  if (k.empty()) throw InvalidArgument("Dykstra needs at least one half-space");
  if (!(tol > 0.0)) throw InvalidArgument("Dykstra tolerance must be positive");
  if (max_iter < 1) throw InvalidArgument("Dykstra needs max_iter >= 1");

  const std::size_t n = k.size();
  const auto m = static_cast<Eigen::Index>(k.dim());
  std::vector<Eigen::VectorXd> corrections(n, Eigen::VectorXd::Zero(m));
  std::vector<double> inv_sq(n);
  for (std::size_t i = 0; i < n; ++i) inv_sq[i] = 1.0 / k.normal(i).coords().squaredNorm();

  Eigen::VectorXd cur = x.coords();
  Eigen::VectorXd y(m);
  double residual = max_violation(k, cur);
  for (long cycle = 1; cycle <= max_iter; ++cycle) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::VectorXd& a = k.normal(i).coords();
      y = cur + corrections[i];
      const double excess = a.dot(y);
      Eigen::VectorXd next = excess > 0.0 ? Eigen::VectorXd(y - (excess * inv_sq[i]) * a) : y;
      change = std::max(change, (next - cur).lpNorm<Eigen::Infinity>());
      corrections[i] = y - next;
      cur = std::move(next);
    }
    residual = max_violation(k, cur);
    if (change <= tol && residual <= tol) {
      return {EuclideanVector(cur), Method::dykstra, cycle, residual, std::nullopt, false, {}};
    }
  }
  throw ConvergenceError("Dykstra iteration did not converge within " + std::to_string(max_iter) + " cycles",
                         std::vector<double>(cur.data(), cur.data() + cur.size()), residual, max_iter);
}

namespace detail {

// Neumaier compensated summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  void add(const CompensatedSum& o) {
    add(o.sum);
    add(o.carry);
  }
  double value() const { return sum + carry; }
};

}  // namespace detail

/// Pool-adjacent-violators for min sum w_i (x_i - y_i)^2 s.t. x_1 <= ... <= x_m.
/// Adjacent blocks are pooled while the earlier mean is >= the later one.
template <class Real = double>
std::vector<Real> pool_adjacent_violators(std::span<const Real> y, std::span<const Real> w,
                                          std::size_t* merges = nullptr) {
  if (y.size() != w.size()) throw DimensionMismatch("PAVA: data and weights differ in length");
  struct Block {
    detail::CompensatedSum weighted;
    detail::CompensatedSum weight;
    std::size_t count;
    double mean() const { return weighted.value() / weight.value(); }
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  std::size_t pooled = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    Block b{{}, {}, 1};
    b.weighted.add(static_cast<double>(w[i]) * static_cast<double>(y[i]));
    b.weight.add(static_cast<double>(w[i]));
    blocks.push_back(b);
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() >= blocks.back().mean()) {
      Block last = blocks.back();
      blocks.pop_back();
      blocks.back().weighted.add(last.weighted);
      blocks.back().weight.add(last.weight);
      blocks.back().count += last.count;
      ++pooled;
    }
  }
  std::vector<Real> out;
  out.reserve(y.size());
  for (const auto& b : blocks) out.insert(out.end(), b.count, static_cast<Real>(b.mean()));
  if (merges) *merges = pooled;
  return out;
}

/// Weighted monotone regression of y along the chain 1 <= 2 <= ... <= m.
inline EuclideanVector project_pava_chain(const EuclideanVector& y, const WeightVector& w) {
  require_same_dim(y.dim(), w.size(), "project_pava_chain");
  const auto yv = y.to_vector();
  auto fit = pool_adjacent_violators<double>(yv, w.values());
  return EuclideanVector(std::span<const double>(fit));
}

/// Recognizes a weighted monotone cone: exactly m-1 normals, each positive at
/// some k and negative at k+1 and zero elsewhere, every k used once. Returns
/// weights (normalized so w_1 = 1) reproducing the cone, or nothing.
inline std::optional<WeightVector> recognize_monotone_cone(const PolyhedralCone& k) {
  const std::size_t m = k.dim();
  if (m < 2 || k.size() != m - 1) return std::nullopt;
  std::vector<double> ratio(m - 1, 0.0);  // sqrt(w_{k+1} / w_k)
  std::vector<bool> used(m - 1, false);
  for (const auto& h : k.halfspaces()) {
    const Eigen::VectorXd& a = h.normal().coords();
    std::vector<Eigen::Index> nz;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a(i) != 0.0) nz.push_back(i);
    if (nz.size() != 2 || nz[1] != nz[0] + 1) return std::nullopt;
    const auto pos = static_cast<std::size_t>(nz[0]);
    if (!(a(nz[0]) > 0.0 && a(nz[1]) < 0.0) || used[pos]) return std::nullopt;
    used[pos] = true;
    ratio[pos] = a(nz[0]) / -a(nz[1]);
  }
  std::vector<double> w(m, 1.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    w[i + 1] = w[i] * ratio[i] * ratio[i];
    if (!std::isfinite(w[i + 1]) || !(w[i + 1] > 0.0)) return std::nullopt;
  }
  // Every normal must be a positive multiple of (1/sqrt(w_k), -1/sqrt(w_{k+1})).
  for (const auto& h : k.halfspaces()) {
    const Eigen::VectorXd& a = h.normal().coords();
    Eigen::Index pos = 0;
    while (a(pos) == 0.0) ++pos;
    const auto p = static_cast<std::size_t>(pos);
    const double lhs = a(pos) * (1.0 / std::sqrt(w[p + 1]));
    const double rhs = -a(pos + 1) * (1.0 / std::sqrt(w[p]));
    if (std::abs(lhs - rhs) > 1e-12 * std::max(std::abs(lhs), std::abs(rhs))) return std::nullopt;
  }
  return WeightVector(std::move(w));
}

/// Projection onto a weighted monotone cone through PAVA:
/// P_K z = sqrt(w) * iso(z / sqrt(w)) with weights w.
inline ProjectionResult project_monotone_pava(const PolyhedralCone& k, const EuclideanVector& x,
                                              const WeightVector& w) {
  require_same_dim(x.dim(), k.dim(), "project_monotone_pava");
  const auto scaled = scale_by_weights(x, w, ScaleDirection::inverse).to_vector();
  std::size_t merges = 0;
  auto fit = pool_adjacent_violators<double>(scaled, w.values(), &merges);
  auto point = scale_by_weights(EuclideanVector(std::span<const double>(fit)), w, ScaleDirection::forward);
  const double residual = max_violation(k, point.coords());
  return {std::move(point), Method::pava, static_cast<long>(merges), residual, std::nullopt, false, {}};
}

/// Dispatcher. Automatic routing: weighted monotone cones go through PAVA,
/// cones within the exact dimension cap through the exact solver, the rest
/// through Dykstra.
inline ProjectionResult project(const PolyhedralCone& k, const EuclideanVector& x, const Config& cfg = {}) {
  require_same_dim(x.dim(), k.dim(), "project");
  if (k.empty()) return {x, cfg.method == Method::automatic ? Method::exact : cfg.method, 0, 0.0, std::nullopt, false, {}};
  switch (cfg.method) {
    case Method::exact:
      return project_exact(k, x, cfg);
    case Method::dykstra:
      return project_dykstra(k, x, cfg.tol, cfg.max_iter);
    case Method::pava: {
      auto w = recognize_monotone_cone(k);
      if (!w) throw InvalidArgument("PAVA requested but the cone is not a weighted monotone cone");
      return project_monotone_pava(k, x, *w);
    }
    case Method::automatic:
      break;
  }
  if (auto w = recognize_monotone_cone(k)) return project_monotone_pava(k, x, *w);
  if (k.dim() <= cfg.max_dim) return project_exact(k, x, cfg);
  return project_dykstra(k, x, cfg.tol, cfg.max_iter);
}

struct RegressionResult {
  EuclideanVector fit;
  ProjectionResult projection;  // projection of sqrt(w) y onto the regression cone
};

/// iso(y) = (1/sqrt(w)) P_K(sqrt(w) y) with K the isotonic regression cone of (graph, w).
inline RegressionResult isotonic_regression_detailed(const RegressionProblem& p, const Config& cfg = {}) {
  const PolyhedralCone k = build_isotonic_cone(p.graph, p.w);
  auto proj = project(k, scale_by_weights(p.y, p.w, ScaleDirection::forward), cfg);
  auto fit = scale_by_weights(proj.point, p.w, ScaleDirection::inverse);
  return {std::move(fit), std::move(proj)};
}

inline EuclideanVector isotonic_regression(const RegressionProblem& p, const Config& cfg = {}) {
  return isotonic_regression_detailed(p, cfg).fit;
}

}  // namespace isocone
