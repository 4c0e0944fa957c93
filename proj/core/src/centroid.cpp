#include "mnp/centroid.hpp"

#include <algorithm>
#include <cmath>

namespace mnp {

namespace {

Matrix gather_columns(const Matrix& a, const std::vector<Index>& cols) {
  Matrix out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = a.col(cols[k]);
  return out;
}

}  // namespace

Vector local_norm_weights(const Instance& inst, const Iterate& it) {
  const std::vector<Index> free = it.free_indices();
  Vector w(static_cast<Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    const Index i = free[k];
    const double xi = it.x()[i];
    double weight = 1.0 / xi;
    if (inst.has_finite_bound(i)) weight += 1.0 / (inst.u()[i] - xi);
    w[static_cast<Index>(k)] = std::min(weight, kMaxLocalWeight);
  }
  return w;
}

Vector centroid(const Instance& inst, const Iterate& it, const CentroidMapping& mapping) {
  const std::vector<Index> free = it.free_indices();
  if (free.empty()) return it.x();

  // b - sum_{i in I1} u(i) A^i; lower-bound coordinates contribute nothing.
  Vector rhs = inst.b();
  for (Index i : it.upper_indices()) rhs -= inst.u()[i] * inst.a().col(i);

  const Matrix columns = gather_columns(inst.a(), free);
  Vector w_free;
  if (mapping.kind == MappingKind::oblivious) {
    w_free = min_norm_least_squares(columns, rhs);
  } else {
    Vector anchor(static_cast<Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) anchor[static_cast<Index>(k)] = it.x()[free[k]];
    w_free = weighted_constrained_ls(columns, rhs, anchor, local_norm_weights(inst, it));
  }

  Vector w = it.x();
  for (std::size_t k = 0; k < free.size(); ++k) w[free[k]] = w_free[static_cast<Index>(k)];
  return w;
}

bool is_stable(const Instance& inst, const Iterate& it, const CentroidMapping& mapping, double tol) {
  if (it.free_indices().empty()) return true;
  const Vector w = centroid(inst, it, mapping);
  return (w - it.x()).lpNorm<Eigen::Infinity>() <= tol * (1.0 + it.x().lpNorm<Eigen::Infinity>());
}

double free_gradient_norm(const Instance& inst, const Iterate& it) {
  const Vector g = gradient(inst, it);
  double worst = 0.0;
  for (Index i : it.free_indices()) worst = std::max(worst, std::abs(g[i]));
  return worst;
}

}  // namespace mnp
