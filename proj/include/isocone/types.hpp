#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isocone/errors.hpp"

namespace isocone {

/// A point or direction of R^m. Always at least one coordinate, all finite.
class EuclideanVector {
 public:
  explicit EuclideanVector(Eigen::VectorXd coords) : coords_(std::move(coords)) { validate(); }

  EuclideanVector(std::initializer_list<double> coords)
      : coords_(Eigen::Map<const Eigen::VectorXd>(coords.begin(),
                                                  static_cast<Eigen::Index>(coords.size()))) {
    validate();
  }

  explicit EuclideanVector(std::span<const double> coords)
      : coords_(Eigen::Map<const Eigen::VectorXd>(coords.data(),
                                                  static_cast<Eigen::Index>(coords.size()))) {
    validate();
  }

  static EuclideanVector zeros(std::size_t dim) {
    return EuclideanVector(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)));
  }
  static EuclideanVector ones(std::size_t dim) {
    return EuclideanVector(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim)));
  }
  /// Standard unit vector e_i (0-based index).
  static EuclideanVector unit(std::size_t dim, std::size_t i) {
    if (i >= dim) throw InvalidArgument("unit vector index out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return EuclideanVector(std::move(v));
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_(static_cast<Eigen::Index>(i)); }
  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  std::vector<double> to_vector() const { return {coords_.data(), coords_.data() + coords_.size()}; }
  double norm() const { return coords_.norm(); }

  friend bool operator==(const EuclideanVector& a, const EuclideanVector& b) {
    return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

 private:
  void validate() const {
    if (coords_.size() < 1) throw InvalidArgument("vector must have at least one coordinate");
    if (!coords_.allFinite()) throw InvalidArgument("vector coordinates must be finite");
  }

  Eigen::VectorXd coords_;
};

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

inline double dot(const EuclideanVector& a, const EuclideanVector& b) {
  require_same_dim(a.dim(), b.dim(), "dot");
  return a.coords().dot(b.coords());
}

/// Closed half-space {x : <normal, x> <= offset}.
class HalfSpace {
 public:
  explicit HalfSpace(EuclideanVector normal, double offset = 0.0)
      : normal_(std::move(normal)), offset_(offset) {
    if (!std::isfinite(offset_)) throw InvalidArgument("half-space offset must be finite");
    if (normal_.coords().isZero(0.0)) throw InvalidArgument("half-space normal must be nonzero");
  }

  const EuclideanVector& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  std::size_t dim() const noexcept { return normal_.dim(); }

  bool contains(const EuclideanVector& x, double tol) const {
    return dot(normal_, x) - offset_ <= tol * normal_.norm();
  }

 private:
  EuclideanVector normal_;
  double offset_;
};

/// Intersection of finitely many half-spaces through the origin. An empty list
/// denotes the whole space. Normals are stored exactly as given.
class PolyhedralCone {
 public:
  PolyhedralCone(std::size_t dim, std::vector<HalfSpace> halfspaces)
      : dim_(dim), halfspaces_(std::move(halfspaces)) {
    if (dim_ < 1) throw InvalidArgument("cone dimension must be positive");
    for (const auto& h : halfspaces_) {
      require_same_dim(h.dim(), dim_, "cone half-space");
      if (h.offset() != 0.0) throw InvalidArgument("cone half-spaces must pass through the origin");
    }
  }

  static PolyhedralCone from_normals(std::size_t dim, const std::vector<EuclideanVector>& normals) {
    std::vector<HalfSpace> hs;
    hs.reserve(normals.size());
    for (const auto& a : normals) hs.emplace_back(a, 0.0);
    return PolyhedralCone(dim, std::move(hs));
  }

  /// The nonnegative orthant written as {x : <-e_i, x> <= 0}.
  static PolyhedralCone orthant(std::size_t dim) {
    std::vector<EuclideanVector> normals;
    for (std::size_t i = 0; i < dim; ++i) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      a(static_cast<Eigen::Index>(i)) = -1.0;
      normals.emplace_back(std::move(a));
    }
    return from_normals(dim, normals);
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return halfspaces_.size(); }
  bool empty() const noexcept { return halfspaces_.empty(); }
  const std::vector<HalfSpace>& halfspaces() const noexcept { return halfspaces_; }
  const EuclideanVector& normal(std::size_t i) const { return halfspaces_.at(i).normal(); }

  /// Normals stacked as rows (size() x dim()).
  Eigen::MatrixXd normals_matrix() const {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < size(); ++i) a.row(static_cast<Eigen::Index>(i)) = normal(i).coords();
    return a;
  }

  PolyhedralCone subcone(const std::vector<std::size_t>& indices) const {
    std::vector<HalfSpace> hs;
    hs.reserve(indices.size());
    for (auto i : indices) hs.push_back(halfspaces_.at(i));
    return PolyhedralCone(dim_, std::move(hs));
  }

 private:
  std::size_t dim_;
  std::vector<HalfSpace> halfspaces_;
};

/// Directed edge tail -> head, 0-based vertex indices.
struct Edge {
  std::size_t tail;
  std::size_t head;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple directed graph on vertices {0, ..., m-1}: no loops, no repeated edges.
/// Edge order is preserved; it fixes the order of the cone normals built from it.
class ConstraintGraph {
 public:
  ConstraintGraph(std::size_t num_vertices, std::vector<Edge> edges)
      : num_vertices_(num_vertices), edges_(std::move(edges)) {
    if (num_vertices_ < 1) throw InvalidArgument("graph needs at least one vertex");
    std::set<Edge> seen;
    for (const auto& e : edges_) {
      if (e.tail >= num_vertices_ || e.head >= num_vertices_)
        throw InvalidArgument("edge endpoint out of range");
      if (e.tail == e.head) throw InvalidArgument("graph must not contain loops");
      if (!seen.insert(e).second) throw InvalidArgument("graph must not contain duplicate edges");
    }
  }

  /// The path 0 -> 1 -> ... -> m-1.
  static ConstraintGraph chain(std::size_t m) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < m; ++i) edges.push_back({i, i + 1});
    return ConstraintGraph(m, std::move(edges));
  }

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  std::size_t num_vertices_;
  std::vector<Edge> edges_;
};

/// Strictly positive, finite weights.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw InvalidArgument("weight vector must be nonempty");
    for (double w : weights_) {
      if (!std::isfinite(w) || !(w > 0.0)) throw InvalidArgument("weights must be finite and > 0");
    }
  }

  static WeightVector ones(std::size_t m) { return WeightVector(std::vector<double>(m, 1.0)); }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_.at(i); }
  const std::vector<double>& values() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

}  // namespace isocone
