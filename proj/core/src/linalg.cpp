#include "mnp/linalg.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mnp/error.hpp"

namespace mnp {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

constexpr int kPowerIterationCap = 10000;
constexpr double kPowerIterationTol = 1e-15;

}  // namespace

Vector mat_vec(const Matrix& a, const Vector& v) {
  require(a.cols() == v.size(), "mat_vec: vector length must equal column count");
  return a * v;
}

RankRevealingLS::RankRevealingLS(const Matrix& b, double rank_tol)
    : rows_(b.rows()), cols_(b.cols()) {
  if (cols_ == 0 || rows_ == 0) {
    q_null_ = Matrix::Identity(cols_, cols_);
    q_range_.resize(cols_, 0);
    return;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(b.transpose());
  qr.setThreshold(rank_tol);
  rank_ = qr.rank();
  const Matrix q = qr.householderQ();
  q_range_ = q.leftCols(rank_);
  q_null_ = q.rightCols(cols_ - rank_);
  if (rank_ > 0) reduced_.compute(b * q_range_);
}

Vector RankRevealingLS::solve_min_norm(const Vector& rhs) const {
  require(rhs.size() == rows_, "least squares: rhs length must equal row count");
  if (rank_ == 0) return Vector::Zero(cols_);
  const Vector s = reduced_.solve(rhs);
  return q_range_ * s;
}

Matrix RankRevealingLS::null_space() const { return q_null_; }

Vector min_norm_least_squares(const Matrix& b, const Vector& rhs) {
  require(rhs.size() == b.rows(), "min_norm_least_squares: rhs length must equal row count");
  return RankRevealingLS(b).solve_min_norm(rhs);
}

Vector weighted_constrained_ls(const Matrix& b, const Vector& rhs,
                               const Vector& anchor, const Vector& weights) {
  require(rhs.size() == b.rows(), "weighted_constrained_ls: rhs length must equal row count");
  require(anchor.size() == b.cols() && weights.size() == b.cols(),
          "weighted_constrained_ls: anchor and weights must have one entry per column");
  for (Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw ContractError("weighted_constrained_ls: weights must be positive and finite");
    }
  }
  const RankRevealingLS ls(b);
  Vector w = ls.solve_min_norm(rhs);
  if (ls.rank() == ls.cols()) return w;

  // Every minimizer is w + N t. Pick t minimizing ||D (w + N t - anchor)||;
  // D N has full column rank, so t is unique.
  const Matrix null = ls.null_space();
  const Matrix scaled = weights.asDiagonal() * null;
  const Vector target = weights.asDiagonal() * (anchor - w);
  const Vector t = scaled.colPivHouseholderQr().solve(target);
  w += null * t;
  return w;
}

Index numerical_rank(const Matrix& b, double rank_tol) {
  if (b.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(b);
  qr.setThreshold(rank_tol);
  return qr.rank();
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0 || a.isZero(0.0)) return 0.0;
  // Fixed-seed start vector: almost surely not orthogonal to the top
  // right singular vector.
  std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  Vector v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = unit(gen);
  v.normalize();

  double lambda = 0.0;
  for (int iter = 0; iter < kPowerIterationCap; ++iter) {
    Vector w = a.transpose() * (a * v);
    const double next = w.norm();
    if (next == 0.0) break;
    v = w / next;
    const bool converged = std::abs(next - lambda) <= kPowerIterationTol * next;
    lambda = next;
    if (converged) break;
  }
  return (a * v).norm();
}

}  // namespace mnp
