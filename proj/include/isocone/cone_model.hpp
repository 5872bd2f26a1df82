#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "isocone/config.hpp"
#include "isocone/errors.hpp"
#include "isocone/linalg.hpp"
#include "isocone/types.hpp"

namespace isocone {

inline void require_exact_dim(std::size_t dim, std::size_t max_dim) {
  if (dim > max_dim) {
    throw CapExceeded("dimension " + std::to_string(dim) + " exceeds the exact-geometry cap " +
                      std::to_string(max_dim) +
                      "; exact enumeration is unavailable (raise ISOCONE_DMAX or use an iterative method)");
  }
}

/// Membership with a tolerance scaled by each normal's length, so rescaling a
/// normal never changes the answer.
inline bool cone_contains(const PolyhedralCone& k, const EuclideanVector& x, double tol = 1e-9) {
  require_same_dim(x.dim(), k.dim(), "cone_contains");
  for (const auto& h : k.halfspaces()) {
    if (!h.contains(x, tol)) return false;
  }
  return true;
}

/// Largest scaled violation max_i <a_i, x> / ||a_i||, clamped at zero.
inline double max_violation(const PolyhedralCone& k, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (const auto& h : k.halfspaces()) {
    worst = std::max(worst, h.normal().coords().dot(x) / h.normal().norm());
  }
  return worst;
}

/// Coordinate-wise order u <= v.
inline bool leq_orthant(const EuclideanVector& u, const EuclideanVector& v) {
  require_same_dim(u.dim(), v.dim(), "leq_orthant");
  return (u.coords().array() <= v.coords().array()).all();
}

/// Order induced by the cone: u <=_K v iff v - u lies in K.
inline bool leq_cone(const PolyhedralCone& k, const EuclideanVector& u, const EuclideanVector& v,
                     double tol = 1e-9) {
  require_same_dim(u.dim(), v.dim(), "leq_cone");
  return cone_contains(k, EuclideanVector(Eigen::VectorXd(v.coords() - u.coords())), tol);
}

/// Isotonic regression cone: for every edge (i, j) the constraint
/// x_i / sqrt(w_i) <= x_j / sqrt(w_j), one half-space per edge in edge order.
inline PolyhedralCone build_isotonic_cone(const ConstraintGraph& g, const WeightVector& w) {
  require_same_dim(w.size(), g.num_vertices(), "build_isotonic_cone weights vs vertices");
  const auto m = static_cast<Eigen::Index>(g.num_vertices());
  std::vector<HalfSpace> hs;
  hs.reserve(g.edges().size());
  for (const auto& e : g.edges()) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
    a(static_cast<Eigen::Index>(e.tail)) = 1.0 / std::sqrt(w[e.tail]);
    a(static_cast<Eigen::Index>(e.head)) = -1.0 / std::sqrt(w[e.head]);
    hs.emplace_back(EuclideanVector(std::move(a)), 0.0);
  }
  return PolyhedralCone(g.num_vertices(), std::move(hs));
}

/// Weighted monotone cone x_1/sqrt(w_1) <= ... <= x_m/sqrt(w_m).
inline PolyhedralCone build_monotone_cone(const WeightVector& w) {
  if (w.size() < 2) throw InvalidArgument("monotone cone needs m >= 2");
  return build_isotonic_cone(ConstraintGraph::chain(w.size()), w);
}

/// The cone with m(m-1) facets: for each pair k < l the normals with (-2, 1)
/// and (1, -2) at positions (k, l). Lies inside the nonnegative orthant and has
/// the all-ones vector in its interior.
inline PolyhedralCone extremal_isotonic_cone(std::size_t m) {
  if (m < 2) throw InvalidArgument("extremal cone needs m >= 2");
  const auto dim = static_cast<Eigen::Index>(m);
  std::vector<HalfSpace> hs;
  hs.reserve(m * (m - 1));
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index l = k + 1; l < dim; ++l) {
      Eigen::VectorXd a1 = Eigen::VectorXd::Zero(dim);
      a1(k) = -2.0;
      a1(l) = 1.0;
      Eigen::VectorXd a2 = Eigen::VectorXd::Zero(dim);
      a2(k) = 1.0;
      a2(l) = -2.0;
      hs.emplace_back(EuclideanVector(std::move(a1)), 0.0);
      hs.emplace_back(EuclideanVector(std::move(a2)), 0.0);
    }
  }
  return PolyhedralCone(m, std::move(hs));
}

enum class ScaleDirection { forward, inverse };

/// forward: z_i * sqrt(w_i); inverse: z_i / sqrt(w_i).
inline EuclideanVector scale_by_weights(const EuclideanVector& z, const WeightVector& w,
                                        ScaleDirection direction) {
  require_same_dim(z.dim(), w.size(), "scale_by_weights");
  Eigen::VectorXd out(z.coords());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = std::sqrt(w[i]);
    out(static_cast<Eigen::Index>(i)) = direction == ScaleDirection::forward ? out(static_cast<Eigen::Index>(i)) * s
                                                                             : out(static_cast<Eigen::Index>(i)) / s;
  }
  return EuclideanVector(std::move(out));
}

/// Indices of a sublist of half-spaces defining the same cone in which every
/// member is necessary. Half-space i is dropped when its normal lies in the
/// cone spanned by the other surviving normals (Farkas), decided by NNLS.
inline std::vector<std::size_t> irredundant_indices(const PolyhedralCone& k, const Config& cfg = {}) {
  require_exact_dim(k.dim(), cfg.max_dim);
  const std::size_t n = k.size();
  std::vector<bool> alive(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && alive[j]) others.push_back(j);
    if (others.empty()) continue;
    Eigen::MatrixXd c(static_cast<Eigen::Index>(k.dim()), static_cast<Eigen::Index>(others.size()));
    for (std::size_t t = 0; t < others.size(); ++t) c.col(static_cast<Eigen::Index>(t)) = k.normal(others[t]).coords();
    const Eigen::VectorXd& a = k.normal(i).coords();
    auto sol = linalg::nnls(c, a);
    const double residual = (c * sol.x - a).norm();
    if (residual <= cfg.tol * a.norm()) alive[i] = false;
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) kept.push_back(i);
  return kept;
}

inline PolyhedralCone irredundant_representation(const PolyhedralCone& k, const Config& cfg = {}) {
  return k.subcone(irredundant_indices(k, cfg));
}

namespace detail {

// Calls fn(indices) for every size-r subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    if (r == 0) return;
    std::size_t pos = r;
    while (pos > 0 && idx[pos - 1] == n - r + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Unit-norm generators of K. For a pointed cone these are exactly its extreme
/// rays, found by enumerating (dim-1)-subsets of normals whose equality system
/// has a one-dimensional solution space. When K contains a line, the rays of
/// K intersected with the orthogonal complement of its lineality space are
/// returned, followed by +/- an orthonormal basis of the lineality space, so
/// the nonnegative span of the list is always K.
inline std::vector<EuclideanVector> extreme_rays(const PolyhedralCone& k, const Config& cfg = {}) {
  if (k.empty()) throw InvalidArgument("the whole space (no half-spaces) has no extreme rays");
  require_exact_dim(k.dim(), cfg.max_dim);

  const PolyhedralCone irr = irredundant_representation(k, cfg);
  const Eigen::MatrixXd a = irr.normals_matrix();
  const auto m = static_cast<Eigen::Index>(k.dim());
  const Eigen::MatrixXd lineality = linalg::null_space(a, m);
  const Eigen::Index rank = m - lineality.cols();

  std::vector<EuclideanVector> rays;
  auto already_have = [&](const Eigen::VectorXd& d) {
    for (const auto& r : rays)
      if ((r.coords() - d).lpNorm<Eigen::Infinity>() < 1e-9) return true;
    return false;
  };

  detail::for_each_subset(irr.size(), static_cast<std::size_t>(rank - 1), [&](const std::vector<std::size_t>& s) {
    Eigen::MatrixXd eq(static_cast<Eigen::Index>(s.size()) + lineality.cols(), m);
    for (std::size_t t = 0; t < s.size(); ++t) eq.row(static_cast<Eigen::Index>(t)) = a.row(static_cast<Eigen::Index>(s[t]));
    if (lineality.cols() > 0) eq.bottomRows(lineality.cols()) = lineality.transpose();
    const Eigen::MatrixXd ns = linalg::null_space(eq, m);
    if (ns.cols() != 1) return;
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd d = sign * ns.col(0);
      d.normalize();
      if (max_violation(irr, d) <= cfg.tol && !already_have(d)) rays.emplace_back(d);
    }
  });

  for (Eigen::Index c = 0; c < lineality.cols(); ++c) {
    rays.emplace_back(Eigen::VectorXd(lineality.col(c)));
    rays.emplace_back(Eigen::VectorXd(-lineality.col(c)));
  }
  return rays;
}

struct GeneratingResult {
  bool generating = false;
  std::optional<EuclideanVector> witness;  // strictly interior point when generating
};

/// Decides whether K has nonempty interior. A derivative-free multi-start search
/// minimizes max_i <a_i, x>/||a_i|| over [-1, 1]^m; if that fails, the sum of
/// the generators (a relative-interior point) is tested.
inline GeneratingResult is_generating(const PolyhedralCone& k, const Config& cfg = {}) {
  if (k.empty()) return {true, EuclideanVector::ones(k.dim())};
  require_exact_dim(k.dim(), cfg.max_dim);

  const auto m = static_cast<Eigen::Index>(k.dim());
  Eigen::MatrixXd unit_normals = k.normals_matrix();
  for (Eigen::Index i = 0; i < unit_normals.rows(); ++i) unit_normals.row(i).normalize();
  auto score = [&](const Eigen::VectorXd& x) { return (unit_normals * x).maxCoeff(); };

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (std::size_t start = 0; start < cfg.starts; ++start) {
    Eigen::VectorXd x(m);
    if (start == 0) {
      x.setOnes();
    } else if (start == 1) {
      x = -Eigen::VectorXd::Ones(m);
    } else {
      for (Eigen::Index i = 0; i < m; ++i) x(i) = coord(rng);
    }
    double fx = score(x);
    for (double h = 0.5; h > 1e-7 && fx >= -cfg.strict_tol; h *= 0.5) {
      bool improved = true;
      while (improved && fx >= -cfg.strict_tol) {
        improved = false;
        for (Eigen::Index i = 0; i < m; ++i) {
          for (double step : {h, -h}) {
            const double old = x(i);
            x(i) = std::clamp(old + step, -1.0, 1.0);
            const double f = score(x);
            if (f < fx) {
              fx = f;
              improved = true;
            } else {
              x(i) = old;
            }
          }
        }
      }
    }
    if (fx < -cfg.strict_tol) return {true, EuclideanVector(std::move(x))};
  }

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
  for (const auto& r : extreme_rays(k, cfg)) sum += r.coords();
  if (sum.norm() > 0.0) {
    sum.normalize();
    if (score(sum) < -cfg.strict_tol) return {true, EuclideanVector(std::move(sum))};
  }
  return {false, std::nullopt};
}

}  // namespace isocone
