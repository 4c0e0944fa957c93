#pragma once

#include <cstdint>
#include <vector>

#include "mnp/instance.hpp"
#include "mnp/linalg.hpp"

namespace mnp {

inline constexpr double kDefaultSnapTol = 1e-12;

/// Default optimality tolerance 1e-9 (1 + ||b||).
double default_opt_tol(const Instance& inst);

enum class BoundState : std::uint8_t { lower, upper, free };

struct PartitionSizes {
  Index lower = 0;  // |I0|
  Index upper = 0;  // |I1|
  Index free = 0;   // |J|
  bool operator==(const PartitionSizes&) const = default;
};

/// A feasible point with its bound partition (I0, I1, J) and cached
/// residual A x - b. Membership in I0/I1 is exact equality with the bound.
class Iterate {
 public:
  const Vector& x() const { return x_; }
  const Vector& residual() const { return residual_; }
  double objective() const { return objective_; }
  Index size() const { return x_.size(); }

  BoundState state(Index i) const { return states_[static_cast<std::size_t>(i)]; }
  const std::vector<BoundState>& states() const { return states_; }
  std::vector<Index> lower_indices() const { return indices(BoundState::lower); }
  std::vector<Index> upper_indices() const { return indices(BoundState::upper); }
  std::vector<Index> free_indices() const { return indices(BoundState::free); }
  PartitionSizes sizes() const;

 private:
  friend Iterate make_iterate(const Instance&, Vector, double);
  std::vector<Index> indices(BoundState s) const;

  Vector x_;
  Vector residual_;
  double objective_ = 0.0;
  std::vector<BoundState> states_;
};

/// Snap coordinates within snap_tol * max(1, u(i)) of a bound onto it and
/// compute the partition, residual and objective. Throws ContractError when
/// a coordinate is non-finite or outside the box by more than the tolerance.
Iterate make_iterate(const Instance& inst, Vector x_raw, double snap_tol = kDefaultSnapTol);

/// g = A^T (A x - b).
Vector gradient(const Instance& inst, const Iterate& it);

enum class ViolationKind {
  none,
  lower_negative_gradient,   // i in I0 with g(i) < -tol
  upper_positive_gradient,   // i in I1 with g(i) > tol
  free_nonzero_gradient,     // i in J with |g(i)| > tol
};

struct OptimalityCheck {
  bool optimal = true;
  Index index = -1;  // worst violating coordinate
  ViolationKind kind = ViolationKind::none;
  double violation = 0.0;
};

OptimalityCheck check_optimality(const Instance& inst, const Iterate& it, double tol);
OptimalityCheck check_optimality(const Iterate& it, const Vector& grad, double tol);

}  // namespace mnp
