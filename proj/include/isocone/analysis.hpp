#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "isocone/cone_model.hpp"
#include "isocone/config.hpp"
#include "isocone/linalg.hpp"
#include "isocone/solvers.hpp"
#include "isocone/types.hpp"

namespace isocone {

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

struct InnerProduct {
  std::size_t first;
  std::size_t second;
  double value;
};

/// Data checked on the way to a positive verdict.
struct PassEvidence {
  std::string summary;
  std::vector<InnerProduct> inner_products;  // filled by the cone-level check
  std::vector<std::size_t> normals;          // indices (of the analyzed object) that were examined
};

/// A normal with two components of the same strict sign: a^k a^l > 0.
struct SignPatternViolation {
  std::size_t normal;
  std::size_t k;
  std::size_t l;
  double product;
};

/// Two irredundant normals at an acute angle: <a_i, a_j> > 0.
struct AcutePair {
  std::size_t first;
  std::size_t second;
  double inner_product;
};

/// sum_t coefficients[t] * a_{indices[t]} = 0 with unit-norm coefficients.
struct LinearDependence {
  std::vector<std::size_t> indices;
  std::vector<double> coefficients;
};

/// Two distinct edges sharing a tail (shared_tail) or a head.
struct SharedEndpoint {
  Edge first;
  Edge second;
  bool shared_tail;
};

/// Edges of a directed cycle, each head being the tail of the next.
struct DirectedCycle {
  std::vector<Edge> edges;
};

using FailEvidence = std::variant<SignPatternViolation, AcutePair, LinearDependence, SharedEndpoint, DirectedCycle>;

struct Certificate {
  bool verdict = false;
  std::variant<PassEvidence, FailEvidence> witness;
  std::vector<std::string> warnings;

  const FailEvidence* failure() const { return std::get_if<FailEvidence>(&witness); }
  const PassEvidence* pass() const { return std::get_if<PassEvidence>(&witness); }
};

inline bool reverify(const SignPatternViolation& f, std::span<const HalfSpace> hs) {
  if (f.normal >= hs.size()) return false;
  const auto& a = hs[f.normal].normal();
  if (f.k >= a.dim() || f.l >= a.dim() || f.k == f.l) return false;
  return a[f.k] * a[f.l] > 0.0;
}

inline bool reverify(const AcutePair& f, const PolyhedralCone& k) {
  if (f.first >= k.size() || f.second >= k.size() || f.first == f.second) return false;
  return dot(k.normal(f.first), k.normal(f.second)) > 0.0;
}

inline bool reverify(const LinearDependence& f, const PolyhedralCone& k, double tol = 1e-9) {
  if (f.indices.empty() || f.indices.size() != f.coefficients.size()) return false;
  Eigen::VectorXd combo = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k.dim()));
  double scale = 0.0;
  double coeff_norm = 0.0;
  for (std::size_t t = 0; t < f.indices.size(); ++t) {
    if (f.indices[t] >= k.size()) return false;
    combo += f.coefficients[t] * k.normal(f.indices[t]).coords();
    scale = std::max(scale, k.normal(f.indices[t]).norm());
    coeff_norm += f.coefficients[t] * f.coefficients[t];
  }
  return std::abs(std::sqrt(coeff_norm) - 1.0) < 1e-6 && combo.norm() <= tol * scale;
}

inline bool reverify(const SharedEndpoint& f, const ConstraintGraph& g) {
  auto has = [&](const Edge& e) {
    return std::find(g.edges().begin(), g.edges().end(), e) != g.edges().end();
  };
  if (!(has(f.first) && has(f.second)) || f.first == f.second) return false;
  return f.shared_tail ? f.first.tail == f.second.tail : f.first.head == f.second.head;
}

inline bool reverify(const DirectedCycle& f, const ConstraintGraph& g) {
  if (f.edges.empty()) return false;
  for (std::size_t t = 0; t < f.edges.size(); ++t) {
    if (std::find(g.edges().begin(), g.edges().end(), f.edges[t]) == g.edges().end()) return false;
    if (f.edges[t].head != f.edges[(t + 1) % f.edges.size()].tail) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Characterizations
// ---------------------------------------------------------------------------

/// Coordinate-wise isotonicity form: every normal satisfies a^k a^l <= 0 for
/// k != l, i.e. has at most one positive and at most one negative component.
/// Offsets are ignored, so the test also applies to general half-space lists.
inline Certificate check_orthant_isotonic_form(std::span<const HalfSpace> hs) {
  if (hs.empty()) throw InvalidArgument("check_orthant_isotonic_form needs at least one half-space");
  const std::size_t m = hs.front().dim();
  for (const auto& h : hs) require_same_dim(h.dim(), m, "check_orthant_isotonic_form");

  PassEvidence pass;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto& a = hs[i].normal();
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t l = k + 1; l < m; ++l) {
        const double prod = a[k] * a[l];
        if (prod > 0.0) return {false, FailEvidence{SignPatternViolation{i, k, l, prod}}, {}};
      }
    }
    pass.normals.push_back(i);
  }
  pass.summary = std::to_string(hs.size()) + " normals, each with at most one positive and one negative component";
  return {true, std::move(pass), {}};
}

/// Isotonic projection cone criterion: the irredundant normals must be linearly
/// independent (the dual is simplicial in its span) and pairwise non-acute.
/// Indices in the evidence refer to K's own half-space list.
inline Certificate check_isotonic_projection_cone(const PolyhedralCone& k, const Config& cfg = {}) {
  require_exact_dim(k.dim(), cfg.max_dim);
  Certificate cert;
  if (!is_generating(k, cfg).generating) {
    cert.warnings.push_back("cone is not generating; the criterion characterizes isotonic projection only for "
                            "closed generating cones");
  }
  const auto kept = irredundant_indices(k, cfg);

  PassEvidence pass;
  pass.normals = kept;
  for (std::size_t s = 0; s < kept.size(); ++s) {
    for (std::size_t t = s + 1; t < kept.size(); ++t) {
      const auto& ai = k.normal(kept[s]);
      const auto& aj = k.normal(kept[t]);
      const double ip = dot(ai, aj);
      if (ip > 1e-12 * ai.norm() * aj.norm()) {
        cert.verdict = false;
        cert.witness = FailEvidence{AcutePair{kept[s], kept[t], ip}};
        return cert;
      }
      pass.inner_products.push_back({kept[s], kept[t], ip});
    }
  }

  if (!kept.empty()) {
    const Eigen::MatrixXd a = k.subcone(kept).normals_matrix();
    if (linalg::rank(a) < static_cast<Eigen::Index>(kept.size())) {
      const Eigen::MatrixXd ns = linalg::null_space(a.transpose(), a.rows());
      LinearDependence dep;
      dep.indices = kept;
      Eigen::VectorXd c = ns.cols() > 0 ? Eigen::VectorXd(ns.col(0)) : Eigen::VectorXd::Zero(a.rows());
      dep.coefficients.assign(c.data(), c.data() + c.size());
      cert.verdict = false;
      cert.witness = FailEvidence{std::move(dep)};
      return cert;
    }
  }
  pass.summary = kept.empty() ? std::string("no constraints: the cone is the whole space")
                              : std::to_string(kept.size()) +
                                    " irredundant normals, linearly independent and pairwise non-acute";
  cert.verdict = true;
  cert.witness = std::move(pass);
  return cert;
}

/// Graph form of the same criterion: no two edges share a tail, no two share a
/// head, and no directed cycle, so every component is a chain or a single vertex.
/// A cycle forces its vertices to be equal and the cone loses its interior.
inline Certificate check_graph_isotonic_projection(const ConstraintGraph& g) {
  const std::size_t m = g.num_vertices();
  std::vector<std::optional<Edge>> by_tail(m), by_head(m);
  for (const auto& e : g.edges()) {
    if (by_tail[e.tail]) return {false, FailEvidence{SharedEndpoint{*by_tail[e.tail], e, true}}, {}};
    if (by_head[e.head]) return {false, FailEvidence{SharedEndpoint{*by_head[e.head], e, false}}, {}};
    by_tail[e.tail] = e;
    by_head[e.head] = e;
  }
  for (const auto& start : g.edges()) {
    DirectedCycle cycle{{start}};
    while (cycle.edges.size() <= m && cycle.edges.back().head != start.tail && by_tail[cycle.edges.back().head])
      cycle.edges.push_back(*by_tail[cycle.edges.back().head]);
    if (cycle.edges.back().head == start.tail) return {false, FailEvidence{std::move(cycle)}, {}};
  }
  PassEvidence pass;
  pass.summary = "every component is a directed path or a single vertex";
  return {true, std::move(pass), {}};
}

enum class ComponentKind { isolated, chain, cycle, non_chain };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::isolated: return "isolated";
    case ComponentKind::chain: return "chain";
    case ComponentKind::cycle: return "cycle";
    case ComponentKind::non_chain: return "non-chain";
  }
  return "unknown";
}

struct GraphComponent {
  std::vector<std::size_t> vertices;  // ascending
  std::vector<Edge> edges;            // in graph order
  ComponentKind kind;
};

/// Weakly connected components, ordered by smallest vertex. A component is a
/// chain when its edges form one directed path; a directed cycle meets the
/// degree condition too but is labeled separately.
inline std::vector<GraphComponent> decompose_graph(const ConstraintGraph& g) {
  const std::size_t m = g.num_vertices();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.tail), b = find(e.head);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::vector<GraphComponent> comps;
  std::vector<std::size_t> slot(m, SIZE_MAX);
  for (std::size_t v = 0; v < m; ++v) {
    const auto r = find(v);
    if (slot[r] == SIZE_MAX) {
      slot[r] = comps.size();
      comps.push_back({{}, {}, ComponentKind::isolated});
    }
    comps[slot[r]].vertices.push_back(v);
  }
  for (const auto& e : g.edges()) comps[slot[find(e.tail)]].edges.push_back(e);

  std::vector<std::size_t> out(m, 0), in(m, 0);
  for (const auto& e : g.edges()) {
    ++out[e.tail];
    ++in[e.head];
  }
  for (auto& c : comps) {
    if (c.edges.empty()) continue;
    bool degrees_ok = true;
    for (auto v : c.vertices) degrees_ok = degrees_ok && out[v] <= 1 && in[v] <= 1;
    if (!degrees_ok) {
      c.kind = ComponentKind::non_chain;
    } else if (c.edges.size() + 1 == c.vertices.size()) {
      c.kind = ComponentKind::chain;
    } else {
      c.kind = ComponentKind::cycle;
    }
  }
  return comps;
}

// ---------------------------------------------------------------------------
// Counterexample search
// ---------------------------------------------------------------------------

enum class IsotonicityOrder { orthant, cone };

struct Counterexample {
  EuclideanVector u;
  EuclideanVector v;
  EuclideanVector pu;
  EuclideanVector pv;
  std::size_t trial;
  std::size_t violated_index;  // component (orthant order) or half-space (cone order)
  double violation;            // how far Pu <= Pv fails, in the scaled sense
};

namespace detail {

// Independent generator per trial so the trial index space can be split freely.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

// Generators of the ordering cone: e_i for the orthant, K's rays otherwise.
inline std::vector<Eigen::VectorXd> order_generators(const PolyhedralCone& k, IsotonicityOrder order,
                                                     const Config& cfg) {
  std::vector<Eigen::VectorXd> gens;
  const auto m = static_cast<Eigen::Index>(k.dim());
  if (order == IsotonicityOrder::orthant || k.empty()) {
    for (Eigen::Index i = 0; i < m; ++i) {
      gens.push_back(Eigen::VectorXd::Unit(m, i));
      if (order == IsotonicityOrder::cone) gens.push_back(-Eigen::VectorXd::Unit(m, i));
    }
    return gens;
  }
  for (const auto& r : extreme_rays(k, cfg)) gens.push_back(r.coords());
  return gens;
}

}  // namespace detail

/// Samples u <= v in the chosen order (u uniform on [-1,1]^m, v - u a random
/// nonnegative combination of order generators with coefficients on [0,1]) and
/// returns the first pair whose exact projections violate Pu <= Pv by more
/// than 1e-7.
inline std::optional<Counterexample> find_isotonicity_counterexample(const PolyhedralCone& k,
                                                                     IsotonicityOrder order, std::size_t trials,
                                                                     std::uint64_t seed, const Config& cfg = {}) {
  require_exact_dim(k.dim(), cfg.max_dim);
  if (trials < 1) throw InvalidArgument("trials must be positive");
  constexpr double violation_tol = 1e-7;
  const auto m = static_cast<Eigen::Index>(k.dim());
  const auto gens = detail::order_generators(k, order, cfg);

  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = detail::trial_rng(seed, t);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> coeff(0.0, 1.0);
    Eigen::VectorXd u(m);
    for (Eigen::Index i = 0; i < m; ++i) u(i) = coord(rng);
    Eigen::VectorXd v = u;
    for (const auto& g : gens) v += coeff(rng) * g;

    EuclideanVector ue(u), ve(v);
    auto pu = project_exact(k, ue, cfg).point;
    auto pv = project_exact(k, ve, cfg).point;
    const Eigen::VectorXd diff = pv.coords() - pu.coords();

    std::size_t worst_index = 0;
    double worst = 0.0;
    if (order == IsotonicityOrder::orthant) {
      for (Eigen::Index i = 0; i < m; ++i) {
        if (-diff(i) > worst) {
          worst = -diff(i);
          worst_index = static_cast<std::size_t>(i);
        }
      }
    } else {
      for (std::size_t i = 0; i < k.size(); ++i) {
        const auto& a = k.normal(i);
        const double s = a.coords().dot(diff) / a.norm();
        if (s > worst) {
          worst = s;
          worst_index = i;
        }
      }
    }
    if (worst > violation_tol) {
      return Counterexample{std::move(ue), std::move(ve), std::move(pu), std::move(pv), t, worst_index, worst};
    }
  }
  return std::nullopt;
}

}  // namespace isocone
