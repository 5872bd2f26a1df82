#pragma once

// Command-line front end. Exit codes: 0 success (whatever the verdicts),
// 1 usage error, 2 input/parse error, 3 numerical failure or cap exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "isocone/analysis.hpp"
#include "isocone/cone_model.hpp"
#include "isocone/config.hpp"
#include "isocone/document.hpp"
#include "isocone/solvers.hpp"

namespace isocone::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kNumerical = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw UsageError(std::string(what) + ": empty entry in \"" + text + "\"");
    item = item.substr(first, last - first + 1);
    if (!item.empty() && item.front() == '+') item.erase(0, 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw UsageError(std::string(what) + ": cannot parse \"" + item + "\" as a number");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

inline ProblemDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

inline nlohmann::json indices_1based(const std::vector<std::size_t>& idx) {
  nlohmann::json j = nlohmann::json::array();
  for (auto i : idx) j.push_back(i + 1);
  return j;
}

inline nlohmann::json edge_json(const Edge& e) { return {e.tail + 1, e.head + 1}; }

/// Certificates in JSON form; every index is 1-based like the input files.
inline nlohmann::json certificate_json(const Certificate& c) {
  nlohmann::json j;
  j["verdict"] = c.verdict;
  if (const auto* pass = c.pass()) {
    nlohmann::json ev = {{"type", "pass"}, {"summary", pass->summary}};
    if (!pass->normals.empty()) ev["normals"] = indices_1based(pass->normals);
    if (!pass->inner_products.empty()) {
      ev["inner_products"] = nlohmann::json::array();
      for (const auto& ip : pass->inner_products)
        ev["inner_products"].push_back({ip.first + 1, ip.second + 1, ip.value});
    }
    j["evidence"] = ev;
  } else if (const auto* fail = c.failure()) {
    j["evidence"] = std::visit(
        [](const auto& f) -> nlohmann::json {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, SignPatternViolation>) {
            return {{"type", "sign_pattern"}, {"normal", f.normal + 1}, {"components", {f.k + 1, f.l + 1}},
                    {"product", f.product}};
          } else if constexpr (std::is_same_v<T, AcutePair>) {
            return {{"type", "acute_pair"}, {"normals", {f.first + 1, f.second + 1}},
                    {"inner_product", f.inner_product}};
          } else if constexpr (std::is_same_v<T, LinearDependence>) {
            return {{"type", "linear_dependence"}, {"normals", indices_1based(f.indices)},
                    {"coefficients", f.coefficients}};
          } else if constexpr (std::is_same_v<T, DirectedCycle>) {
            nlohmann::json edges = nlohmann::json::array();
            for (const auto& e : f.edges) edges.push_back(edge_json(e));
            return {{"type", "directed_cycle"}, {"edges", edges}};
          } else {
            return {{"type", f.shared_tail ? "shared_tail" : "shared_head"},
                    {"edges", {edge_json(f.first), edge_json(f.second)}}};
          }
        },
        *fail);
  }
  if (!c.warnings.empty()) j["warnings"] = c.warnings;
  return j;
}

inline nlohmann::json projection_json(const ProjectionResult& r) {
  nlohmann::json j;
  j["point"] = to_json(r.point);
  j["method"] = to_string(r.method);
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["kkt_gap"] = r.kkt_gap ? nlohmann::json(*r.kkt_gap) : nlohmann::json(nullptr);
  if (r.degenerate) {
    j["degenerate"] = true;
    j["diagnostic"] = r.diagnostic;
  }
  return j;
}

inline void write(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

inline int cmd_construct(const std::string& kind, std::size_t dim, const std::string& weights,
                         const std::string& graph_path, std::ostream& out) {
  PolyhedralCone cone(1, {});
  if (kind == "extremal") {
    if (dim < 2) throw UsageError("construct extremal needs --dim >= 2");
    cone = extremal_isotonic_cone(dim);
  } else if (kind == "monotone") {
    if (weights.empty()) throw UsageError("construct monotone needs --weights");
    auto w = parse_number_list(weights, "--weights");
    if (w.size() < 2) throw UsageError("construct monotone needs at least two weights");
    cone = build_monotone_cone(WeightVector(std::move(w)));
  } else if (kind == "isotonic") {
    if (graph_path.empty()) throw UsageError("construct isotonic needs --graph FILE");
    auto doc = load_document(graph_path);
    if (!doc.graph) throw DocumentError(graph_path + " has no \"graph\"");
    auto w = !weights.empty() ? WeightVector(parse_number_list(weights, "--weights"))
                              : (doc.weights ? *doc.weights : WeightVector::ones(doc.dim));
    cone = build_isotonic_cone(*doc.graph, w);
  } else {
    throw UsageError("unknown cone kind \"" + kind + "\" (expected extremal, monotone or isotonic)");
  }
  write(out, to_json(document_from_cone(cone)));
  return kOk;
}

inline int cmd_analyze(const std::string& path, const Config& cfg, std::ostream& out) {
  const auto doc = load_document(path);
  const auto cone = doc.cone();
  nlohmann::json j;
  j["dim"] = cone.dim();
  j["halfspaces"] = cone.size();
  const auto gen = is_generating(cone, cfg);
  j["generating"] = {{"verdict", gen.generating},
                     {"witness", gen.witness ? to_json(*gen.witness) : nlohmann::json(nullptr)}};
  j["irredundant"] = indices_1based(irredundant_indices(cone, cfg));
  j["orthant_isotonic_form"] =
      cone.empty() ? nlohmann::json(nullptr) : certificate_json(check_orthant_isotonic_form(cone.halfspaces()));
  j["isotonic_projection_cone"] = certificate_json(check_isotonic_projection_cone(cone, cfg));
  if (doc.graph) {
    j["graph_check"] = certificate_json(check_graph_isotonic_projection(*doc.graph));
    j["components"] = nlohmann::json::array();
    for (const auto& c : decompose_graph(*doc.graph)) {
      nlohmann::json edges = nlohmann::json::array();
      for (const auto& e : c.edges) edges.push_back(edge_json(e));
      j["components"].push_back(
          {{"kind", to_string(c.kind)}, {"vertices", indices_1based(c.vertices)}, {"edges", edges}});
    }
  }
  write(out, j);
  return kOk;
}

inline int cmd_project(const std::string& path, const std::string& point, const Config& cfg, std::ostream& out,
                       std::ostream& err) {
  const auto doc = load_document(path);
  const auto cone = doc.cone();
  std::vector<EuclideanVector> inputs;
  if (!point.empty()) {
    auto coords = parse_number_list(point, "--point");
    if (coords.size() != cone.dim())
      throw UsageError("--point has " + std::to_string(coords.size()) + " coordinates, cone dimension is " +
                       std::to_string(cone.dim()));
    inputs.emplace_back(std::span<const double>(coords));
  } else {
    inputs = doc.points;
  }
  if (inputs.empty()) throw UsageError("no point given (use --point or a \"points\" array)");

  int code = kOk;
  std::vector<nlohmann::json> results;
  for (const auto& x : inputs) {
    auto r = project(cone, x, cfg);
    if (r.degenerate) {
      err << "warning: " << r.diagnostic << '\n';
      code = kNumerical;
    }
    results.push_back(projection_json(r));
  }
  nlohmann::json j = results.size() == 1 && !point.empty() ? results.front()
                                                           : nlohmann::json{{"results", results}};
  j["seed"] = cfg.seed;
  write(out, j);
  return code;
}

inline int cmd_isoreg(const std::string& path, const std::string& weights, const std::string& y,
                      const Config& cfg, std::ostream& out) {
  const auto doc = load_document(path);
  if (!doc.graph) throw DocumentError(path + " has no \"graph\"");
  if (y.empty()) throw UsageError("isoreg needs --y");
  auto yv = parse_number_list(y, "--y");
  if (yv.size() != doc.dim) throw UsageError("--y length differs from the graph's vertex count");
  auto w = !weights.empty() ? WeightVector(parse_number_list(weights, "--weights"))
                            : (doc.weights ? *doc.weights : WeightVector::ones(doc.dim));
  if (w.size() != doc.dim) throw UsageError("--weights length differs from the graph's vertex count");

  RegressionProblem problem(EuclideanVector(std::span<const double>(yv)), std::move(w), *doc.graph);
  const auto res = isotonic_regression_detailed(problem, cfg);
  nlohmann::json j;
  j["iso"] = to_json(res.fit);
  j["method"] = to_string(res.projection.method);
  j["iterations"] = res.projection.iterations;
  j["residual"] = res.projection.residual;
  j["kkt_gap"] = res.projection.kkt_gap ? nlohmann::json(*res.projection.kkt_gap) : nlohmann::json(nullptr);
  j["seed"] = cfg.seed;
  write(out, j);
  return res.projection.degenerate ? kNumerical : kOk;
}

inline int cmd_falsify(const std::string& path, const std::string& order, std::size_t trials, const Config& cfg,
                       std::ostream& out) {
  const auto doc = load_document(path);
  const auto cone = doc.cone();
  IsotonicityOrder ord;
  if (order == "orthant") {
    ord = IsotonicityOrder::orthant;
  } else if (order == "cone") {
    ord = IsotonicityOrder::cone;
  } else {
    throw UsageError("--order must be orthant or cone");
  }
  if (trials < 1) throw UsageError("--trials must be positive");
  const auto found = find_isotonicity_counterexample(cone, ord, trials, cfg.seed, cfg);
  nlohmann::json j;
  if (found) {
    j["witness"] = {{"u", to_json(found->u)},
                    {"v", to_json(found->v)},
                    {"Pu", to_json(found->pu)},
                    {"Pv", to_json(found->pv)},
                    {"trial", found->trial},
                    {ord == IsotonicityOrder::orthant ? "violated_component" : "violated_constraint",
                     found->violated_index + 1},
                    {"violation", found->violation}};
  } else {
    j["witness"] = nullptr;
  }
  j["order"] = order;
  j["trials"] = trials;
  j["seed"] = cfg.seed;
  write(out, j);
  return kOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projection onto polyhedral cones, isotonic regression and isotonicity analysis"};
  app.require_subcommand(1);

  Config cfg;
  std::string method = "auto";
  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--method", method, "auto, exact or dykstra")->check(CLI::IsMember({"auto", "exact", "dykstra"}));
    sub->add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", cfg.max_iter, "Dykstra cycle limit")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed (recorded in the output)");
  };

  std::string kind, weights, graph_path, file, point, y, order = "orthant";
  std::size_t dim = 0, trials = 10000;

  auto* construct = app.add_subcommand("construct", "emit the normals of a cone family");
  construct->add_option("kind", kind, "extremal | monotone | isotonic")->required();
  construct->add_option("--dim", dim, "dimension (extremal)");
  construct->add_option("--weights", weights, "comma-separated positive weights");
  construct->add_option("--graph", graph_path, "document with a \"graph\" (isotonic)");

  auto* analyze = app.add_subcommand("analyze", "decide the isotonicity characterizations");
  analyze->add_option("file", file, "problem document")->required();
  analyze->add_option("--seed", cfg.seed, "seed for the interior search");

  auto* proj = app.add_subcommand("project", "project a point onto the document's cone");
  proj->add_option("file", file, "problem document")->required();
  proj->add_option("--point", point, "comma-separated coordinates");
  add_solver_flags(proj);

  auto* isoreg = app.add_subcommand("isoreg", "weighted isotonic regression over a graph");
  isoreg->add_option("file", file, "document with a \"graph\"")->required();
  isoreg->add_option("--weights", weights, "comma-separated positive weights");
  isoreg->add_option("--y", y, "comma-separated observations")->required();
  add_solver_flags(isoreg);

  auto* falsify = app.add_subcommand("falsify", "search for a violation of isotone projection");
  falsify->add_option("file", file, "problem document")->required();
  falsify->add_option("--order", order, "orthant | cone")->check(CLI::IsMember({"orthant", "cone"}));
  falsify->add_option("--trials", trials, "number of sampled pairs");
  falsify->add_option("--seed", cfg.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  cfg.method = method == "exact" ? Method::exact : method == "dykstra" ? Method::dykstra : Method::automatic;

  try {
    if (construct->parsed()) return cmd_construct(kind, dim, weights, graph_path, out);
    if (analyze->parsed()) return cmd_analyze(file, cfg, out);
    if (proj->parsed()) return cmd_project(file, point, cfg, out, err);
    if (isoreg->parsed()) return cmd_isoreg(file, weights, y, cfg, out);
    if (falsify->parsed()) return cmd_falsify(file, order, trials, cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConvergenceError& e) {
    nlohmann::json diag = {{"error", e.what()},
                           {"best_iterate", e.best_iterate()},
                           {"residual", e.residual()},
                           {"iterations", e.iterations()}};
    err << diag.dump() << '\n';
    return kNumerical;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  }
  return kUsage;
}

}  // namespace isocone::cli
