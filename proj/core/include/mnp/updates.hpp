#pragma once

#include "mnp/instance.hpp"
#include "mnp/iterate.hpp"

namespace mnp {

enum class UpdateKind { frank_wolfe, projected_gradient, coordinate };

enum class PgStep {
  optimal_line_search,  // closed form along z; NNLS only
  fixed,                // x - lambda g projected to the box, then segment line search
};

struct UpdateRule {
  UpdateKind kind = UpdateKind::projected_gradient;
  PgStep pg_step = PgStep::optimal_line_search;
  double fixed_step = 0.0;  // lambda; 0 selects 1 / ||A||^2
};

struct UpdateOptions {
  double opt_tol = 1e-9;
  double snap_tol = kDefaultSnapTol;
  double step = 0.0;  // resolved fixed PG step, must be > 0 when used
};

struct UpdateResult {
  Iterate y;
  bool moved = false;
  /// ||z|| for PG, z(j) for coordinate, <g, x - ybar> for Frank-Wolfe.
  double direction_norm = 0.0;
  Index coordinate = -1;  // coordinate rule only
};

/// z(i) = max{-g(i), 0}. NNLS instances only.
Vector pg_direction(const Instance& inst, const Iterate& it);

/// y = x + (||z||^2 / ||A z||^2) z from a stable NNLS point.
UpdateResult pg_update(const Instance& inst, const Iterate& it, const UpdateOptions& opts);

/// Clip x - lambda g to the box, then take the best point on [x, clipped].
UpdateResult capacitated_pg_update(const Instance& inst, const Iterate& it, const UpdateOptions& opts);

/// Linear minimization over the box (keeping x(i) where |g(i)| <= opt_tol),
/// followed by exact line search on [x, ybar]. Requires finite bounds.
UpdateResult fw_update(const Instance& inst, const Iterate& it, const UpdateOptions& opts);

/// One-coordinate exact minimization. The coordinate is the eligible index
/// (I0 with g < 0 or I1 with g > 0) with largest |g|, smallest index on
/// ties; for NNLS this is argmax z.
UpdateResult coordinate_update(const Instance& inst, const Iterate& it, const UpdateOptions& opts);

/// Dispatch on the rule. Projected gradient uses the closed form on NNLS
/// instances with optimal_line_search and the clipped form otherwise.
UpdateResult apply_update(const Instance& inst, const Iterate& it, const UpdateRule& rule,
                          const UpdateOptions& opts);

/// Fixed PG step for the rule: rule.fixed_step, or 1 / ||A||^2.
double resolve_fixed_step(const Instance& inst, const UpdateRule& rule);

/// Exact minimizer t in [0, 1] of 1/2 ||A (x + t d) - b||^2.
double segment_minimizer(const Instance& inst, const Iterate& it, const Vector& d);

}  // namespace mnp
