#include <gtest/gtest.h>

#include <cmath>

#include "dioph/subspace.hpp"
#include "oracles.hpp"

using namespace dioph;

TEST(Subspace, OrthonormalBasisAndProjector) {
  Eigen::MatrixXd cols(4, 2);
  cols << 1, 0, 2, 1, 0, 3, 1, 1;
  Subspace s = orthonormal_subspace(cols);
  EXPECT_EQ(s.ambient_dim(), 4);
  EXPECT_EQ(s.dim(), 2);
  EXPECT_LT((s.basis().transpose() * s.basis() - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-13);
  EXPECT_LT((s.projector() * s.projector() - s.projector()).norm(), 1e-13);
  EXPECT_LT((s.projector() * cols - cols).norm(), 1e-12);
  EXPECT_LT((s.complement().transpose() * s.basis()).norm(), 1e-13);
}

TEST(Subspace, RejectsDegenerateInput) {
  Eigen::MatrixXd dependent(3, 2);
  dependent << 1, 2, 1, 2, 1, 2;
  EXPECT_THROW(orthonormal_subspace(dependent), RankDeficient);
  EXPECT_THROW(orthonormal_subspace(Eigen::MatrixXd::Identity(3, 3)), DimensionError);
}

TEST(Subspace, DistanceMatchesProjectorOracle) {
  Eigen::MatrixXd cols(4, 2);
  cols << 1, 0.3, std::sqrt(2.0), 1, 0, M_PI, 0.5, 1;
  Subspace s = orthonormal_subspace(cols);
  oracle::for_each_half_box(4, 2, [&](const oracle::Point& z) {
    EXPECT_NEAR(distance_to_subspace(z, s), oracle::projector_distance(cols, z), 1e-12);
  });
}

TEST(Subspace, RationalPointsHaveZeroDistance) {
  Eigen::MatrixXd cols(3, 1);
  cols << 1, 2, 3;
  Subspace s = orthonormal_subspace(cols);
  EXPECT_EQ(distance_to_subspace(IntVector{2, 4, 6}, s), 0.0);
  EXPECT_GT(distance_to_subspace(IntVector{2, 4, 7}, s), 0.1);
}

TEST(Subspace, GoldenLineDistance) {
  const long double g = (1.0L + std::sqrt(5.0L)) / 2.0L;
  Eigen::MatrixXd cols(2, 1);
  cols << 1, static_cast<double>(g);
  Subspace s = orthonormal_subspace(cols);
  for (std::int64_t p = 1; p < 50; ++p) {
    for (std::int64_t q = -50; q < 50; ++q) {
      EXPECT_NEAR(distance_to_subspace(IntVector{p, q}, s), oracle::line_distance(p, q, g), 1e-13);
    }
  }
}

TEST(Graph, CoordinatesReconstructSubspace) {
  Eigen::MatrixXd cols(5, 2);
  cols << 0.1, 0, 0.2, 0.1, 3, 1, 1, 4, 0.5, 0.5;
  Subspace s = orthonormal_subspace(cols);
  const GraphCoordinates g = select_graph_coordinates(s);
  ASSERT_EQ(g.free.size(), 2u);
  ASSERT_EQ(g.dependent.size(), 3u);
  // Every point (x, Theta x) lies on S.
  Eigen::VectorXd z = Eigen::VectorXd::Zero(5);
  const Eigen::Vector2d x(0.7, -1.3);
  for (int i = 0; i < 2; ++i) z[g.free[static_cast<std::size_t>(i)]] = x[i];
  Eigen::VectorXd y = g.theta.entries() * x;
  for (int j = 0; j < 3; ++j) z[g.dependent[static_cast<std::size_t>(j)]] = y[j];
  EXPECT_LT(distance_to_subspace(z, s), 1e-12);
  // The small leading coordinates are poor choices for the free set.
  EXPECT_EQ(g.free, (std::vector<int>{2, 3}));
}

TEST(Graph, GraphSubspaceShapeChecks) {
  Eigen::MatrixXd theta(2, 1);
  theta << 0.5, 0.25;
  Subspace l = graph_subspace(ThetaMatrix(theta), 3);
  EXPECT_EQ(l.dim(), 1);
  EXPECT_LT(distance_to_subspace(Eigen::Vector3d(4, 2, 1), l), 1e-12);
  EXPECT_THROW(graph_subspace(ThetaMatrix(theta), 4), ShapeError);

  Eigen::MatrixXd ambient_cols(4, 3);
  ambient_cols << 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0;
  Subspace ambient = orthonormal_subspace(ambient_cols);
  Subspace inner = graph_subspace(ThetaMatrix(theta), ambient);
  EXPECT_EQ(inner.ambient_dim(), 4);
  EXPECT_LT(distance_to_subspace(Eigen::Vector4d(4, 2, 1, 0), inner), 1e-12);
}

TEST(Graph, PrincipalAngle) {
  Eigen::MatrixXd a(2, 1), b(2, 1);
  a << 1, 0;
  b << 1, 1;
  EXPECT_NEAR(max_principal_angle(orthonormal_subspace(a), orthonormal_subspace(b)), M_PI / 4, 1e-14);
  EXPECT_NEAR(max_principal_angle(orthonormal_subspace(a), orthonormal_subspace(a)), 0.0, 1e-14);
}

TEST(ThetaMatrix, BoundValidation) {
  Eigen::MatrixXd m(1, 2);
  m << 0.5, -3.0;
  EXPECT_THROW(ThetaMatrix(m, 2.0), ShapeError);
  EXPECT_DOUBLE_EQ(ThetaMatrix(m).entry_bound(), 3.0);
  EXPECT_DOUBLE_EQ(ThetaMatrix(m).max_abs_row_sum(), 3.5);
}
