// Small tour of the library: build a cone, analyze it, project onto it and
// fit an isotonic regression.

#include <iostream>

#include "isocone/isocone.hpp"

using namespace isocone;

int main() {
  const auto k = PolyhedralCone::from_normals(3, {{-2, 1, 0}, {1, -2, 0}, {0, 1, -1}});
  const auto cert = check_isotonic_projection_cone(k);
  std::cout << "isotonic projection cone: " << std::boolalpha << cert.verdict << '\n';
  if (const auto* f = cert.failure(); f && std::holds_alternative<AcutePair>(*f)) {
    const auto& pair = std::get<AcutePair>(*f);
    std::cout << "  normals " << pair.first + 1 << " and " << pair.second + 1 << " meet at inner product "
              << pair.inner_product << '\n';
  }

  if (auto witness = find_isotonicity_counterexample(k, IsotonicityOrder::cone, 10000, 42)) {
    std::cout << "counterexample at trial " << witness->trial << ": u = " << witness->u.coords().transpose()
              << ", v = " << witness->v.coords().transpose() << '\n';
  }

  const auto p = project(k, EuclideanVector{3, 0, -1});
  std::cout << "projection of (3, 0, -1): " << p.point.coords().transpose() << " via " << to_string(p.method) << '\n';

  const RegressionProblem problem(EuclideanVector{2, 1}, WeightVector({9, 1}), ConstraintGraph(2, {{0, 1}}));
  std::cout << "iso((2, 1), w = (9, 1)): " << isotonic_regression(problem).coords().transpose() << '\n';
}
