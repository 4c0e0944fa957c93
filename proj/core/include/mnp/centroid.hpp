#pragma once

#include "mnp/instance.hpp"
#include "mnp/iterate.hpp"

namespace mnp {

enum class MappingKind {
  oblivious,   // minimum-norm point of the centroid set (free coordinates)
  local_norm,  // nearest point to x under the diagonal weights D(x)
};

struct CentroidMapping {
  MappingKind kind = MappingKind::local_norm;
};

/// Local-norm weights cap; keeps barely-interior coordinates finite.
inline constexpr double kMaxLocalWeight = 1e12;

/// D(x) restricted to J(x): 1/x(i) for infinite u(i), 1/x(i) + 1/(u(i) - x(i))
/// otherwise, each capped at kMaxLocalWeight. Ordered like free_indices().
Vector local_norm_weights(const Instance& inst, const Iterate& it);

/// A point w of the centroid set for the partition of `it`: w agrees with x
/// on I0 and I1, and (A^J)^T (A w - b) = 0.
Vector centroid(const Instance& inst, const Iterate& it, const CentroidMapping& mapping);

/// ||centroid(it) - x||_inf <= tol (1 + ||x||_inf).
bool is_stable(const Instance& inst, const Iterate& it, const CentroidMapping& mapping, double tol);

/// ||(A^J)^T (A x - b)||_inf, the stationarity of x on its free coordinates.
double free_gradient_norm(const Instance& inst, const Iterate& it);

}  // namespace mnp
