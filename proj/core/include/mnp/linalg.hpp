#pragma once

#include <Eigen/Dense>

namespace mnp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Pivots below this fraction of the largest pivot count as zero.
inline constexpr double kRankTolerance = 1e-10;

Vector mat_vec(const Matrix& a, const Vector& v);

/// Column-pivoted Householder factorization of B^T, kept around so that the
/// minimum-norm solve and the null space of B come from the same rank
/// decision.
///
/// With B^T P = Q R and r = rank, range(B^T) = span Q(:, 0:r) and
/// ker(B) = span Q(:, r:k).
class RankRevealingLS {
 public:
  explicit RankRevealingLS(const Matrix& b, double rank_tol = kRankTolerance);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index rank() const { return rank_; }

  /// argmin ||w|| over argmin ||B w - rhs||.
  Vector solve_min_norm(const Vector& rhs) const;

  /// Orthonormal basis of ker(B), cols() x (cols() - rank()).
  Matrix null_space() const;

 private:
  Index rows_;
  Index cols_;
  Index rank_ = 0;
  Matrix q_range_;  // cols x rank
  Matrix q_null_;   // cols x (cols - rank)
  Eigen::HouseholderQR<Matrix> reduced_;  // QR of P^T B Q_range (rows x rank)
  Eigen::ColPivHouseholderQR<Matrix>::PermutationType perm_;
};

/// Minimum-Euclidean-norm least-squares solution (pseudoinverse solution).
/// k = 0 yields the empty vector.
Vector min_norm_least_squares(const Matrix& b, const Vector& rhs);

/// Among all minimizers of ||B w - rhs||, the one minimizing
/// ||diag(weights) (w - anchor)||. Weights must be positive and finite.
Vector weighted_constrained_ls(const Matrix& b, const Vector& rhs,
                               const Vector& anchor, const Vector& weights);

/// Numerical rank under kRankTolerance.
Index numerical_rank(const Matrix& b, double rank_tol = kRankTolerance);

/// Largest singular value via power iteration on A^T A. Zero matrix gives 0.
double spectral_norm(const Matrix& a);

}  // namespace mnp
