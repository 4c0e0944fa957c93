#include "mnp/updates.hpp"

#include <algorithm>
#include <cmath>

#include "mnp/error.hpp"

namespace mnp {

namespace {

UpdateResult stay(const Iterate& it) {
  UpdateResult r;
  r.y = it;
  r.moved = false;
  return r;
}

Vector clip_to_box(const Instance& inst, Vector v) {
  for (Index i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], 0.0, inst.u()[i]);
  return v;
}

}  // namespace

double segment_minimizer(const Instance& inst, const Iterate& it, const Vector& d) {
  const Vector ad = inst.a() * d;
  const double curvature = ad.squaredNorm();
  const double slope = it.residual().dot(ad);  // = <g, d>
  if (curvature == 0.0) {
    if (slope < 0.0) throw NumericalFault("line search: descent direction with A d = 0");
    return 0.0;
  }
  return std::clamp(-slope / curvature, 0.0, 1.0);
}

Vector pg_direction(const Instance& inst, const Iterate& it) {
  if (!inst.is_nnls()) throw ContractError("pg_direction: requires an NNLS instance (all bounds infinite)");
  return (-gradient(inst, it)).cwiseMax(0.0);
}

UpdateResult pg_update(const Instance& inst, const Iterate& it, const UpdateOptions& opts) {
  if (!inst.is_nnls()) throw ContractError("pg_update: requires an NNLS instance (all bounds infinite)");
  const Vector g = gradient(inst, it);
  if (check_optimality(it, g, opts.opt_tol).optimal) return stay(it);

  const Vector z = (-g).cwiseMax(0.0);
  const double z2 = z.squaredNorm();
  const double az2 = (inst.a() * z).squaredNorm();
  if (az2 == 0.0) throw NumericalFault("pg_update: degenerate direction, A z = 0 with z != 0");

  UpdateResult r;
  r.y = make_iterate(inst, it.x() + (z2 / az2) * z, opts.snap_tol);
  r.moved = true;
  r.direction_norm = std::sqrt(z2);
  return r;
}

UpdateResult capacitated_pg_update(const Instance& inst, const Iterate& it, const UpdateOptions& opts) {
  if (!(opts.step > 0.0)) throw ContractError("capacitated_pg_update: step must be positive");
  const Vector g = gradient(inst, it);
  if (check_optimality(it, g, opts.opt_tol).optimal) return stay(it);

  const Vector target = clip_to_box(inst, it.x() - opts.step * g);
  const Vector d = target - it.x();
  if (d.isZero(0.0)) return stay(it);
  const double t = segment_minimizer(inst, it, d);

  UpdateResult r;
  r.y = make_iterate(inst, t == 1.0 ? target : Vector(it.x() + t * d), opts.snap_tol);
  r.moved = t > 0.0;
  r.direction_norm = d.norm();
  if (!r.moved) r.y = it;
  return r;
}

UpdateResult fw_update(const Instance& inst, const Iterate& it, const UpdateOptions& opts) {
  if (!inst.all_bounds_finite()) throw ContractError("frank-wolfe requires finite bounds");
  const Vector g = gradient(inst, it);
  if (check_optimality(it, g, opts.opt_tol).optimal) return stay(it);

  Vector vertex = it.x();
  for (Index i = 0; i < g.size(); ++i) {
    if (g[i] > opts.opt_tol) vertex[i] = 0.0;
    else if (g[i] < -opts.opt_tol) vertex[i] = inst.u()[i];
  }
  const Vector d = vertex - it.x();
  const double decrease = -g.dot(d);
  if (!(decrease > 0.0)) return stay(it);
  const double t = segment_minimizer(inst, it, d);

  UpdateResult r;
  r.y = make_iterate(inst, t == 1.0 ? vertex : Vector(it.x() + t * d), opts.snap_tol);
  r.moved = t > 0.0;
  r.direction_norm = decrease;
  if (!r.moved) r.y = it;
  return r;
}

UpdateResult coordinate_update(const Instance& inst, const Iterate& it, const UpdateOptions& opts) {
  const Vector g = gradient(inst, it);
  if (check_optimality(it, g, opts.opt_tol).optimal) return stay(it);

  Index best = -1;
  double best_mag = 0.0;
  auto consider = [&](Index i) {
    if (std::abs(g[i]) > best_mag) {
      best = i;
      best_mag = std::abs(g[i]);
    }
  };
  for (Index i = 0; i < g.size(); ++i) {
    const BoundState s = it.state(i);
    if ((s == BoundState::lower && g[i] < -opts.opt_tol) ||
        (s == BoundState::upper && g[i] > opts.opt_tol)) {
      consider(i);
    }
  }
  // Only reachable from an unstable point: the bound coordinates are optimal
  // but some free coordinate is not.
  if (best < 0) {
    for (Index i = 0; i < g.size(); ++i)
      if (it.state(i) == BoundState::free && std::abs(g[i]) > opts.opt_tol) consider(i);
  }
  if (best < 0) return stay(it);

  const double col2 = inst.a().col(best).squaredNorm();
  if (col2 == 0.0) throw NumericalFault("coordinate_update: degenerate zero column with nonzero gradient");

  Vector y = it.x();
  y[best] = std::clamp(y[best] - g[best] / col2, 0.0, inst.u()[best]);

  UpdateResult r;
  r.y = make_iterate(inst, std::move(y), opts.snap_tol);
  r.moved = true;
  r.direction_norm = best_mag;
  r.coordinate = best;
  return r;
}

double resolve_fixed_step(const Instance& inst, const UpdateRule& rule) {
  if (rule.fixed_step > 0.0) return rule.fixed_step;
  const double norm = spectral_norm(inst.a());
  if (norm == 0.0) return 1.0;
  return 1.0 / (norm * norm);
}

UpdateResult apply_update(const Instance& inst, const Iterate& it, const UpdateRule& rule,
                          const UpdateOptions& opts) {
  switch (rule.kind) {
    case UpdateKind::frank_wolfe:
      return fw_update(inst, it, opts);
    case UpdateKind::coordinate:
      return coordinate_update(inst, it, opts);
    case UpdateKind::projected_gradient:
      if (inst.is_nnls() && rule.pg_step == PgStep::optimal_line_search) return pg_update(inst, it, opts);
      return capacitated_pg_update(inst, it, opts);
  }
  throw ContractError("apply_update: unknown update rule");
}

}  // namespace mnp
