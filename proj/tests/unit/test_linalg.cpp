#include <gtest/gtest.h>

#include <random>

#include "mnp/error.hpp"
#include "mnp/linalg.hpp"

namespace {

using mnp::Matrix;
using mnp::Vector;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<mnp::Index>(v.size()));
  mnp::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Matrix random_matrix(mnp::Index r, mnp::Index c, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix a(r, c);
  for (mnp::Index i = 0; i < r; ++i)
    for (mnp::Index j = 0; j < c; ++j) a(i, j) = d(gen);
  return a;
}

TEST(MatVec, HandValues) {
  EXPECT_EQ(mnp::mat_vec(Matrix::Identity(2, 2), vec({3, -1})), vec({3, -1}));
  Matrix row(1, 2);
  row << 1, 1;
  EXPECT_EQ(mnp::mat_vec(row, vec({2, 5})), vec({7}));
  Matrix lower(2, 2);
  lower << 1, 0, 1, 1;
  EXPECT_EQ(mnp::mat_vec(lower, vec({1, 2})), vec({1, 3}));
}

TEST(MatVec, RejectsShapeMismatch) {
  EXPECT_THROW(mnp::mat_vec(Matrix::Identity(2, 2), vec({1, 2, 3})), mnp::DimensionError);
}

TEST(MinNormLeastSquares, HandValues) {
  EXPECT_TRUE(mnp::min_norm_least_squares(Matrix::Identity(2, 2), vec({1, 2})).isApprox(vec({1, 2}), 1e-14));
  Matrix row(1, 2);
  row << 1, 1;
  EXPECT_TRUE(mnp::min_norm_least_squares(row, vec({2})).isApprox(vec({1, 1}), 1e-14));
  Matrix col(2, 1);
  col << 1, 1;
  EXPECT_NEAR(mnp::min_norm_least_squares(col, vec({0, 2}))[0], 1.0, 1e-14);
}

TEST(MinNormLeastSquares, EmptyColumnSet) {
  EXPECT_EQ(mnp::min_norm_least_squares(Matrix(3, 0), vec({1, 2, 3})).size(), 0);
}

TEST(MinNormLeastSquares, MatchesCompleteOrthogonalDecomposition) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    // Rank-deficient: 5 x 7 of rank 3.
    const Matrix b = random_matrix(5, 3, seed) * random_matrix(3, 7, seed + 100);
    const Vector rhs = random_matrix(5, 1, seed + 200).col(0);
    const Vector expected = b.completeOrthogonalDecomposition().solve(rhs);
    EXPECT_TRUE(mnp::min_norm_least_squares(b, rhs).isApprox(expected, 1e-9)) << "seed " << seed;
  }
}

TEST(RankRevealingLS, NullSpaceIsOrthonormalKernel) {
  const Matrix b = random_matrix(3, 2, 7) * random_matrix(2, 6, 8);
  const mnp::RankRevealingLS ls(b);
  EXPECT_EQ(ls.rank(), 2);
  const Matrix n = ls.null_space();
  ASSERT_EQ(n.cols(), 4);
  EXPECT_LT((b * n).norm(), 1e-12);
  EXPECT_TRUE((n.transpose() * n).isApprox(Matrix::Identity(4, 4), 1e-12));
}

TEST(WeightedConstrainedLS, HandValues) {
  Matrix row(1, 2);
  row << 1, 1;
  EXPECT_TRUE(mnp::weighted_constrained_ls(row, vec({2}), vec({0.5, 1.5}), vec({2, 2.0 / 3.0}))
                  .isApprox(vec({0.5, 1.5}), 1e-14));
  EXPECT_TRUE(mnp::weighted_constrained_ls(row, vec({2}), vec({0, 0}), vec({1, 1})).isApprox(vec({1, 1}), 1e-14));
}

TEST(WeightedConstrainedLS, FullColumnRankIgnoresAnchor) {
  const Matrix b = random_matrix(6, 3, 3);
  const Vector rhs = random_matrix(6, 1, 4).col(0);
  const Vector got = mnp::weighted_constrained_ls(b, rhs, vec({5, -3, 9}), vec({0.1, 7, 3}));
  EXPECT_TRUE(got.isApprox(mnp::min_norm_least_squares(b, rhs), 1e-10));
}

TEST(WeightedConstrainedLS, WeightedProjectionOntoLine) {
  // Minimizers of |w1 + w2 - 2| form the line w1 + w2 = 2. The nearest
  // point to the origin under weights (d1, d2) is the weighted projection
  // w_i = 2 (1/d_i^2) / (1/d1^2 + 1/d2^2).
  Matrix row(1, 2);
  row << 1, 1;
  const double d1 = 1.0, d2 = 3.0;
  const double s = 1.0 / (d1 * d1) + 1.0 / (d2 * d2);
  const Vector expected = vec({2.0 / (d1 * d1) / s, 2.0 / (d2 * d2) / s});
  EXPECT_TRUE(mnp::weighted_constrained_ls(row, vec({2}), vec({0, 0}), vec({d1, d2})).isApprox(expected, 1e-13));
}

TEST(WeightedConstrainedLS, RejectsBadWeights) {
  Matrix row(1, 2);
  row << 1, 1;
  EXPECT_THROW(mnp::weighted_constrained_ls(row, vec({2}), vec({0, 0}), vec({1, 0})), mnp::ContractError);
  EXPECT_THROW(mnp::weighted_constrained_ls(row, vec({2}), vec({0, 0}), vec({1})), mnp::DimensionError);
}

TEST(SpectralNorm, HandValues) {
  EXPECT_NEAR(mnp::spectral_norm(Matrix::Identity(3, 3)), 1.0, 1e-12);
  Matrix d(2, 2);
  d << 3, 0, 0, 4;
  EXPECT_NEAR(mnp::spectral_norm(d), 4.0, 1e-12);
  Matrix ones = Matrix::Ones(2, 2);
  EXPECT_NEAR(mnp::spectral_norm(ones), 2.0, 1e-12);
  EXPECT_EQ(mnp::spectral_norm(Matrix::Zero(3, 2)), 0.0);
}

TEST(SpectralNorm, MatchesSvd) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Matrix a = random_matrix(8, 12, seed);
    const double expected = Eigen::JacobiSVD<Matrix>(a).singularValues()[0];
    EXPECT_NEAR(mnp::spectral_norm(a), expected, 1e-9 * expected);
  }
}

TEST(NumericalRank, DetectsDeficiency) {
  EXPECT_EQ(mnp::numerical_rank(Matrix::Ones(3, 3)), 1);
  EXPECT_EQ(mnp::numerical_rank(Matrix::Identity(4, 4)), 4);
}

}  // namespace
