#include <gtest/gtest.h>

#include "generators.hpp"
#include "isocone/isocone.hpp"
#include "oracles.hpp"

using namespace isocone;

namespace {

PolyhedralCone k1() { return PolyhedralCone::from_normals(3, {{-2, 1, 0}, {1, -2, 0}, {0, 0, -1}}); }

double max_abs_diff(const EuclideanVector& a, const Eigen::VectorXd& b) {
  return (a.coords() - b).lpNorm<Eigen::Infinity>();
}

std::vector<std::pair<std::size_t, std::size_t>> edge_pairs(const ConstraintGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : g.edges()) out.emplace_back(e.tail, e.head);
  return out;
}

}  // namespace

TEST(ProjectOrthant, Fixtures) {
  EXPECT_EQ(project_orthant({-1, 2, -3}), (EuclideanVector{0, 2, 0}));
  EXPECT_EQ(project_orthant({1, 2}), (EuclideanVector{1, 2}));
  EXPECT_EQ(project_orthant({-1, -1}), (EuclideanVector{0, 0}));
}

TEST(ProjectHalfspace, Fixtures) {
  EXPECT_EQ(project_halfspace({2, 1}, HalfSpace(EuclideanVector{1, -1})), (EuclideanVector{1.5, 1.5}));
  EXPECT_EQ(project_halfspace({-2, 1}, HalfSpace(EuclideanVector{1, -1})), (EuclideanVector{-2, 1}));
  EXPECT_EQ(project_halfspace({3, 5}, HalfSpace(EuclideanVector{0, 1})), (EuclideanVector{3, 0}));
  EXPECT_THROW(project_halfspace({3, 5, 1}, HalfSpace(EuclideanVector{0, 1})), DimensionMismatch);
}

TEST(ProjectExact, Fixtures) {
  auto orth = project_exact(PolyhedralCone::orthant(2), {-1, 2});
  EXPECT_LE(max_abs_diff(orth.point, Eigen::Vector2d(0, 2)), 1e-15);
  EXPECT_FALSE(orth.degenerate);

  auto chain = project_exact(build_monotone_cone(WeightVector::ones(2)), {2, 1});
  EXPECT_LE(max_abs_diff(chain.point, Eigen::Vector2d(1.5, 1.5)), 1e-15);

  auto interior = project_exact(extremal_isotonic_cone(3), {1, 1, 1});
  EXPECT_EQ(interior.point, (EuclideanVector{1, 1, 1}));
  EXPECT_EQ(interior.iterations, 0);
  EXPECT_EQ(*interior.kkt_gap, 0.0);
}

TEST(ProjectExact, MatchesFaceEnumerationOracle) {
  gen::Rng rng(1234);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t m = gen::uniform_int(rng, 1, 5);
    const std::size_t n = gen::uniform_int(rng, 1, 8);
    auto k = gen::gaussian_cone(rng, m, n);
    auto x = gen::point(rng, m, -3, 3);
    auto ref = oracle::project_by_face_enumeration(k.normals_matrix(), x.coords());
    ASSERT_TRUE(ref.found);
    EXPECT_TRUE(ref.unique);
    auto res = project_exact(k, x);
    EXPECT_FALSE(res.degenerate) << res.diagnostic;
    EXPECT_LE(max_abs_diff(res.point, ref.point), 1e-9);
  }
}

TEST(ProjectExact, DimensionCap) {
  Config cfg;
  cfg.max_dim = 2;
  EXPECT_THROW(project_exact(k1(), {1, 1, 1}, cfg), CapExceeded);
}

TEST(ProjectDykstra, SingleHalfspaceIsPlainProjection) {
  auto k = PolyhedralCone::from_normals(2, {{1, -1}});
  auto res = project_dykstra(k, {2, 1});
  EXPECT_LE(max_abs_diff(res.point, Eigen::Vector2d(1.5, 1.5)), 1e-15);
  EXPECT_LE(res.iterations, 2);
  EXPECT_EQ(res.method, Method::dykstra);
}

TEST(ProjectDykstra, AgreesWithExactOnK1) {
  auto d = project_dykstra(k1(), {-1, -1, 5}, 1e-9, 100000);
  auto e = project_exact(k1(), {-1, -1, 5});
  EXPECT_LE(max_abs_diff(d.point, e.point.coords()), 1e-6);
  // The answer is (0,0,5): x^1, x^2 pushed onto the 2-d apex.
  EXPECT_LE(max_abs_diff(e.point, Eigen::Vector3d(0, 0, 5)), 1e-12);
}

TEST(ProjectDykstra, FixedPointTakesOneCycle) {
  auto res = project_dykstra(k1(), {1, 1, 2});
  EXPECT_EQ(res.iterations, 1);
  EXPECT_EQ(res.point, (EuclideanVector{1, 1, 2}));
}

TEST(ProjectDykstra, ErrorsCarryBestIterate) {
  auto k = extremal_isotonic_cone(4);
  try {
    project_dykstra(k, {-1, 3, -2, 0.5}, 1e-14, 2);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best_iterate().size(), 4u);
    EXPECT_EQ(e.iterations(), 2);
  }
  EXPECT_THROW(project_dykstra(PolyhedralCone(2, {}), {1, 1}), InvalidArgument);
  EXPECT_THROW(project_dykstra(k, {1, 1, 1, 1}, 0.0), InvalidArgument);
}

TEST(Pava, Fixtures) {
  EXPECT_EQ(project_pava_chain({2, 1}, WeightVector::ones(2)), (EuclideanVector{1.5, 1.5}));
  EXPECT_EQ(project_pava_chain({1, 2, 3}, WeightVector({5, 0.1, 2})), (EuclideanVector{1, 2, 3}));
  EXPECT_EQ(project_pava_chain({3, 1, 2}, WeightVector::ones(3)), (EuclideanVector{2, 2, 2}));
  EXPECT_EQ(project_pava_chain({7}, WeightVector::ones(1)), (EuclideanVector{7}));
}

TEST(Pava, TiesArePooled) {
  std::size_t merges = 0;
  std::vector<double> y{1, 1, 1}, w{1, 2, 3};
  auto fit = pool_adjacent_violators<double>(y, w, &merges);
  EXPECT_EQ(fit, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(merges, 2u);
}

TEST(Pava, MatchesWeightedOracle) {
  gen::Rng rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = gen::uniform_int(rng, 1, 7);
    auto y = gen::point(rng, m, -3, 3);
    auto w = gen::weights(rng, m);
    auto fit = project_pava_chain(y, w);
    Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.values().data(), static_cast<Eigen::Index>(m));
    auto ref = oracle::weighted_isotonic_regression(y.coords(), wv, edge_pairs(ConstraintGraph::chain(m)));
    EXPECT_LE(max_abs_diff(fit, ref), 1e-12);
  }
}

TEST(RecognizeMonotone, RecoversWeightsUpToScale) {
  WeightVector w({2.0, 0.5, 8.0, 1.0});
  auto k = build_monotone_cone(w);
  auto rec = recognize_monotone_cone(k);
  ASSERT_TRUE(rec.has_value());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR((*rec)[i] / (*rec)[0], w[i] / w[0], 1e-12);

  // Normals rescaled by positive factors and listed out of order still match.
  auto shuffled = PolyhedralCone::from_normals(3, {{0, 3, -3}, {0.5, -0.5, 0}});
  EXPECT_TRUE(recognize_monotone_cone(shuffled).has_value());
}

TEST(RecognizeMonotone, RejectsOtherCones) {
  EXPECT_FALSE(recognize_monotone_cone(extremal_isotonic_cone(3)).has_value());
  EXPECT_FALSE(recognize_monotone_cone(PolyhedralCone::orthant(2)).has_value());
  // Edge 1 -> 3 skips a vertex.
  EXPECT_FALSE(recognize_monotone_cone(PolyhedralCone::from_normals(3, {{1, -1, 0}, {1, 0, -1}})).has_value());
  // Reversed orientation.
  EXPECT_FALSE(recognize_monotone_cone(PolyhedralCone::from_normals(2, {{-1, 1}})).has_value());
  // Same consecutive pair twice.
  EXPECT_FALSE(recognize_monotone_cone(PolyhedralCone::from_normals(3, {{1, -1, 0}, {2, -2, 0}})).has_value());
}

TEST(Project, DispatchesByShape) {
  auto mono = project(build_monotone_cone(WeightVector::ones(2)), {2, 1});
  EXPECT_EQ(mono.method, Method::pava);
  EXPECT_LE(max_abs_diff(mono.point, Eigen::Vector2d(1.5, 1.5)), 1e-15);

  auto ex = project(k1(), {-1, -1, 5});
  EXPECT_EQ(ex.method, Method::exact);
  EXPECT_LE(max_abs_diff(ex.point, Eigen::Vector3d(0, 0, 5)), 1e-12);

  gen::Rng rng(12);
  auto big = build_isotonic_cone(gen::dag(rng, 12, 0.3), gen::weights(rng, 12));
  auto x = gen::point(rng, 12, -2, 2);
  Config cfg;
  auto res = project(big, x, cfg);
  EXPECT_EQ(res.method, Method::dykstra);
  EXPECT_LE(res.residual, cfg.tol);
}

TEST(Project, ForcedMethods) {
  Config cfg;
  cfg.method = Method::pava;
  EXPECT_THROW(project(k1(), {1, 1, 1}, cfg), InvalidArgument);
  cfg.method = Method::dykstra;
  EXPECT_EQ(project(k1(), {1, 1, 1}, cfg).method, Method::dykstra);
  cfg.method = Method::exact;
  EXPECT_EQ(project(build_monotone_cone(WeightVector::ones(3)), {3, 2, 1}, cfg).method, Method::exact);
}

TEST(Project, WholeSpaceIsIdentity) {
  auto res = project(PolyhedralCone(2, {}), {3, -4});
  EXPECT_EQ(res.point, (EuclideanVector{3, -4}));
}

TEST(IsotonicRegression, Fixtures) {
  auto g = ConstraintGraph(2, {{0, 1}});
  auto a = isotonic_regression(RegressionProblem({2, 1}, WeightVector::ones(2), g));
  EXPECT_LE(max_abs_diff(a, Eigen::Vector2d(1.5, 1.5)), 1e-15);

  auto b = isotonic_regression(RegressionProblem({2, 1}, WeightVector({9, 1}), g));
  EXPECT_LE(max_abs_diff(b, Eigen::Vector2d(1.9, 1.9)), 1e-14);

  auto c = isotonic_regression(RegressionProblem({3, 1, 2}, WeightVector::ones(3), ConstraintGraph::chain(3)));
  EXPECT_LE(max_abs_diff(c, Eigen::Vector3d(2, 2, 2)), 1e-14);

  auto d = isotonic_regression(RegressionProblem({0.5, 1, 4}, WeightVector({1, 3, 2}),
                                                 ConstraintGraph(3, {{0, 1}, {0, 2}})));
  EXPECT_LE(max_abs_diff(d, Eigen::Vector3d(0.5, 1, 4)), 1e-14);
}

TEST(IsotonicRegression, ProblemValidation) {
  EXPECT_THROW(RegressionProblem({1, 2}, WeightVector::ones(3), ConstraintGraph::chain(2)), DimensionMismatch);
  EXPECT_THROW(RegressionProblem({1, 2}, WeightVector::ones(2), ConstraintGraph::chain(3)), DimensionMismatch);
}

TEST(IsotonicRegression, MatchesWeightedOracleOnDags) {
  gen::Rng rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t m = gen::uniform_int(rng, 1, 5);
    auto g = gen::dag(rng, m, 0.5);
    auto w = gen::weights(rng, m);
    auto y = gen::point(rng, m, -2, 2);
    auto fit = isotonic_regression(RegressionProblem(y, w, g));
    Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.values().data(), static_cast<Eigen::Index>(m));
    auto ref = oracle::weighted_isotonic_regression(y.coords(), wv, edge_pairs(g));
    EXPECT_LE(max_abs_diff(fit, ref), 1e-7);
  }
}
