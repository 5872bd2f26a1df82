#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace isocone::linalg {

/// Numerical rank from a column-pivoted QR; pivots below rel_tol times the
/// largest column norm count as zero.
inline Eigen::Index rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(rel_tol);
  return qr.rank();
}

/// Orthonormal basis (as columns) of {z : m z = 0}.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, Eigen::Index cols, double rel_tol = 1e-10) {
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return svd.matrixV().rightCols(cols - r);
}

struct NnlsResult {
  Eigen::VectorXd x;
  Eigen::VectorXd gradient;  // c^T (d - c x); <= 0 on the zero set at optimum
  long iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||c x - d|| subject to x >= 0.
inline NnlsResult nnls(const Eigen::MatrixXd& c, const Eigen::VectorXd& d, long max_iter = 0) {
  const Eigen::Index n = c.cols();
  if (max_iter <= 0) max_iter = 30 * std::max<long>(n, 1);
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = 10.0 * eps * static_cast<double>(std::max(c.rows(), n)) *
                     std::max(1.0, c.norm()) * std::max(1.0, d.norm());

  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  res.gradient = c.transpose() * d;

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    s = Eigen::VectorXd::Zero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd cp(c.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) cp.col(static_cast<Eigen::Index>(k)) = c.col(idx[k]);
    Eigen::VectorXd sp = cp.colPivHouseholderQr().solve(d);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));
  };

  while (res.iterations < max_iter) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (!passive[ju] && !blocked[ju] && res.gradient(j) > best_w) {
        best_w = res.gradient(j);
        best = j;
      }
    }
    if (best < 0) {
      res.converged = true;
      break;
    }
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd s;
    solve_passive(s);
    if (s(best) <= 0.0) {
      // Entering column makes no progress numerically; skip it until x moves.
      passive[static_cast<std::size_t>(best)] = false;
      blocked[static_cast<std::size_t>(best)] = true;
      ++res.iterations;
      continue;
    }

    while (res.iterations < max_iter) {
      ++res.iterations;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) feasible = false;
      if (feasible) {
        res.x = s;
        break;
      }
      double alpha = 1.0;
      Eigen::Index leaving = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          const double a = res.x(j) / (res.x(j) - s(j));
          if (a < alpha) {
            alpha = a;
            leaving = j;
          }
        }
      }
      res.x += alpha * (s - res.x);
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (passive[ju] && (j == leaving || res.x(j) <= 0.0)) {
          passive[ju] = false;
          res.x(j) = 0.0;
        }
      }
      solve_passive(s);
    }
    std::fill(blocked.begin(), blocked.end(), false);
    res.gradient = c.transpose() * (d - c * res.x);
  }
  return res;
}

}  // namespace isocone::linalg
