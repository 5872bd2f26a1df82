#pragma once

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "isocone/cone_model.hpp"
#include "isocone/errors.hpp"
#include "isocone/types.hpp"

namespace isocone {

/// Malformed or inconsistent problem document.
class DocumentError : public Error {
 public:
  using Error::Error;
};

/// JSON problem file:
///   {"dim": m,
///    "normals": [[...], ...],                       optional
///    "graph": {"vertices": m, "edges": [[i, j]]},   optional, 1-based vertices
///    "weights": [...],                              optional, positive
///    "points": [[...], ...]}                        optional
struct ProblemDocument {
  std::size_t dim = 0;
  std::optional<std::vector<EuclideanVector>> normals;
  std::optional<ConstraintGraph> graph;
  std::optional<WeightVector> weights;
  std::vector<EuclideanVector> points;

  /// The cone the document defines; needs exactly one of normals / graph.
  PolyhedralCone cone() const {
    if (normals.has_value() == graph.has_value())
      throw DocumentError("a cone document needs exactly one of \"normals\" or \"graph\"");
    if (normals) return PolyhedralCone::from_normals(dim, *normals);
    return build_isotonic_cone(*graph, weights ? *weights : WeightVector::ones(dim));
  }
};

namespace detail {

inline std::vector<double> json_numbers(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw DocumentError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw DocumentError(std::string(what) + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline EuclideanVector json_vector(const nlohmann::json& j, std::size_t dim, const char* what) {
  auto values = json_numbers(j, what);
  if (values.size() != dim) {
    throw DocumentError(std::string(what) + " has length " + std::to_string(values.size()) + ", expected " +
                        std::to_string(dim));
  }
  try {
    return EuclideanVector(std::span<const double>(values));
  } catch (const Error& e) {
    throw DocumentError(std::string(what) + ": " + e.what());
  }
}

inline std::size_t json_positive_int(const nlohmann::json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw DocumentError(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

}  // namespace detail

inline ProblemDocument parse_document(const nlohmann::json& j) {
  if (!j.is_object()) throw DocumentError("document must be a JSON object");
  if (!j.contains("dim")) throw DocumentError("document is missing \"dim\"");
  ProblemDocument doc;
  doc.dim = detail::json_positive_int(j.at("dim"), "\"dim\"");

  if (j.contains("normals")) {
    const auto& arr = j.at("normals");
    if (!arr.is_array()) throw DocumentError("\"normals\" must be an array of arrays");
    std::vector<EuclideanVector> normals;
    for (const auto& row : arr) {
      auto a = detail::json_vector(row, doc.dim, "normal");
      if (a.coords().isZero(0.0)) throw DocumentError("normals must be nonzero");
      normals.push_back(std::move(a));
    }
    doc.normals = std::move(normals);
  }

  if (j.contains("graph")) {
    const auto& g = j.at("graph");
    if (!g.is_object() || !g.contains("vertices") || !g.contains("edges"))
      throw DocumentError("\"graph\" must be an object with \"vertices\" and \"edges\"");
    const auto m = detail::json_positive_int(g.at("vertices"), "graph \"vertices\"");
    if (m != doc.dim) throw DocumentError("graph vertex count differs from \"dim\"");
    if (!g.at("edges").is_array()) throw DocumentError("graph \"edges\" must be an array");
    std::vector<Edge> edges;
    for (const auto& e : g.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw DocumentError("each edge must be a pair of integers");
      const auto tail = e[0].get<long long>();
      const auto head = e[1].get<long long>();
      if (tail < 1 || head < 1 || tail > static_cast<long long>(m) || head > static_cast<long long>(m))
        throw DocumentError("edge endpoint outside 1.." + std::to_string(m));
      edges.push_back({static_cast<std::size_t>(tail - 1), static_cast<std::size_t>(head - 1)});
    }
    try {
      doc.graph.emplace(m, std::move(edges));
    } catch (const Error& ex) {
      throw DocumentError(std::string("graph: ") + ex.what());
    }
  }

  if (j.contains("weights")) {
    auto w = detail::json_numbers(j.at("weights"), "\"weights\"");
    if (w.size() != doc.dim) throw DocumentError("\"weights\" length differs from \"dim\"");
    try {
      doc.weights.emplace(std::move(w));
    } catch (const Error& ex) {
      throw DocumentError(std::string("weights: ") + ex.what());
    }
  }

  if (j.contains("points")) {
    if (!j.at("points").is_array()) throw DocumentError("\"points\" must be an array of arrays");
    for (const auto& p : j.at("points")) doc.points.push_back(detail::json_vector(p, doc.dim, "point"));
  }
  return doc;
}

inline ProblemDocument parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(std::string("invalid JSON: ") + e.what());
  }
  return parse_document(j);
}

inline nlohmann::json to_json(const EuclideanVector& v) { return v.to_vector(); }

inline nlohmann::json to_json(const ProblemDocument& doc) {
  nlohmann::json j;
  j["dim"] = doc.dim;
  if (doc.normals) {
    j["normals"] = nlohmann::json::array();
    for (const auto& a : *doc.normals) j["normals"].push_back(to_json(a));
  }
  if (doc.graph) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : doc.graph->edges()) edges.push_back({e.tail + 1, e.head + 1});
    j["graph"] = {{"vertices", doc.graph->num_vertices()}, {"edges", edges}};
  }
  if (doc.weights) j["weights"] = doc.weights->values();
  if (!doc.points.empty()) {
    j["points"] = nlohmann::json::array();
    for (const auto& p : doc.points) j["points"].push_back(to_json(p));
  }
  return j;
}

/// Document listing the normals of a cone.
inline ProblemDocument document_from_cone(const PolyhedralCone& k) {
  ProblemDocument doc;
  doc.dim = k.dim();
  std::vector<EuclideanVector> normals;
  for (const auto& h : k.halfspaces()) normals.push_back(h.normal());
  doc.normals = std::move(normals);
  return doc;
}

}  // namespace isocone
