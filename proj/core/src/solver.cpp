#include "mnp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "mnp/error.hpp"

namespace mnp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::iteration_cap: return "iteration_cap";
    case SolveStatus::time_limit: return "time_limit";
  }
  return "unknown";
}

std::string_view to_string(CycleKind kind) {
  return kind == CycleKind::major_update ? "major_update" : "minor_centroid";
}

BoundaryStep boundary_step(const Vector& x, const Vector& w, const Vector& u) {
  BoundaryStep step;
  double best = 1.0;
  for (Index i = 0; i < x.size(); ++i) {
    double ratio = std::numeric_limits<double>::infinity();
    if (w[i] < 0.0) ratio = x[i] / (x[i] - w[i]);
    else if (std::isfinite(u[i]) && w[i] > u[i]) ratio = (u[i] - x[i]) / (w[i] - x[i]);
    if (!(ratio <= best)) continue;
    if (ratio < best) {
      best = ratio;
      step.blocking_lower.clear();
      step.blocking_upper.clear();
    }
    (w[i] < 0.0 ? step.blocking_lower : step.blocking_upper).push_back(i);
  }
  step.alpha = std::max(best, 0.0);
  return step;
}

double alpha_star(const Vector& x, const Vector& w, const Vector& u) {
  return boundary_step(x, w, u).alpha;
}

namespace {

using Clock = std::chrono::steady_clock;

class Run {
 public:
  Run(const Instance& inst, const SolverConfig& cfg)
      : inst_(inst), cfg_(cfg), start_(Clock::now()) {
    opts_.opt_tol = cfg.opt_tol > 0.0 ? cfg.opt_tol : default_opt_tol(inst);
    opts_.snap_tol = cfg.snap_tol;
    const bool clipped_pg = cfg.rule.kind == UpdateKind::projected_gradient &&
                            (!inst.is_nnls() || cfg.rule.pg_step == PgStep::fixed);
    if (clipped_pg) opts_.step = resolve_fixed_step(inst, cfg.rule);
    slack_ = 1e-8 * (1.0 + inst.b().squaredNorm());
  }

  SolveReport execute() {
    if (cfg_.rule.kind == UpdateKind::frank_wolfe && !inst_.all_bounds_finite()) {
      throw ContractError("frank-wolfe requires finite bounds");
    }
    Vector start = cfg_.start ? *cfg_.start : Vector::Zero(inst_.cols());
    if (start.size() != inst_.cols()) throw DimensionError("solve: start length must equal column count");
    Iterate x = make_iterate(inst_, std::move(start), opts_.snap_tol);
    report_.initial_objective = x.objective();

    if (!stabilize(x)) return finish(x);
    if (cfg_.hooks.on_stable) cfg_.hooks.on_stable(x);

    while (true) {
      if (out_of_time()) {
        report_.status = SolveStatus::time_limit;
        return finish(x);
      }
      if (report_.major_cycles >= cfg_.max_major) {
        report_.status = SolveStatus::iteration_cap;
        return finish(x);
      }

      UpdateResult upd = apply_update(inst_, x, cfg_.rule, opts_);
      ++report_.major_cycles;
      if (cfg_.hooks.on_update) cfg_.hooks.on_update(x, upd);
      if (cfg_.record_trace) {
        TraceEvent ev;
        ev.kind = CycleKind::major_update;
        ev.objective_after = upd.y.objective();
        ev.sizes = upd.y.sizes();
        ev.moved = upd.moved;
        ev.direction_norm = upd.direction_norm;
        report_.trace.push_back(ev);
      }
      if (!upd.moved) {
        if (!check_optimality(inst_, x, opts_.opt_tol).optimal) {
          throw NumericalFault("solve: update stalled at a non-optimal point");
        }
        report_.status = SolveStatus::optimal;
        return finish(x);
      }
      guard_monotone(x.objective(), upd.y.objective(), "major update");
      x = std::move(upd.y);

      if (!stabilize(x)) return finish(x);
      if (cfg_.hooks.on_stable) cfg_.hooks.on_stable(x);
    }
  }

 private:
  bool out_of_time() const {
    const std::chrono::duration<double> elapsed = Clock::now() - start_;
    return elapsed.count() > cfg_.time_limit;
  }

  void guard_monotone(double before, double after, const char* where) const {
    if (after > before + slack_) {
      throw NumericalFault(std::string("solve: objective increased during ") + where);
    }
  }

  // Minor cycles. Returns false when a limit stopped the run (status set).
  bool stabilize(Iterate& x) {
    while (true) {
      if (out_of_time()) {
        report_.status = SolveStatus::time_limit;
        return false;
      }
      if (report_.minor_cycles_total >= cfg_.max_minor_total) {
        report_.status = SolveStatus::iteration_cap;
        return false;
      }
      const Vector w = centroid(inst_, x, cfg_.mapping);
      const double x_scale = 1.0 + x.x().lpNorm<Eigen::Infinity>();
      if ((w - x.x()).lpNorm<Eigen::Infinity>() <= opts_.snap_tol * x_scale) return true;

      const BoundaryStep step = boundary_step(x.x(), w, inst_.u());
      Vector raw = step.alpha == 1.0 ? w : Vector(x.x() + step.alpha * (w - x.x()));
      for (Index i : step.blocking_lower) raw[i] = 0.0;
      for (Index i : step.blocking_upper) raw[i] = inst_.u()[i];
      for (Index i = 0; i < raw.size(); ++i) raw[i] = std::clamp(raw[i], 0.0, inst_.u()[i]);

      Iterate next = make_iterate(inst_, std::move(raw), opts_.snap_tol);
      guard_monotone(x.objective(), next.objective(), "minor cycle");
      ++report_.minor_cycles_total;
      if (cfg_.hooks.on_minor) cfg_.hooks.on_minor(x, w, step.alpha, next);
      if (cfg_.record_trace) {
        TraceEvent ev;
        ev.kind = CycleKind::minor_centroid;
        ev.objective_after = next.objective();
        ev.sizes = next.sizes();
        ev.alpha_star = step.alpha;
        report_.trace.push_back(ev);
      }

      const bool same_partition = next.states() == x.states();
      if (step.alpha < 1.0 && next.sizes().free >= x.sizes().free) {
        throw NumericalFault("solve: boundary step did not fix a new coordinate");
      }
      x = std::move(next);
      // A full step lands in the centroid set of an unchanged partition, which
      // the mapping returns unchanged.
      if (step.alpha == 1.0 && same_partition) return true;
    }
  }

  SolveReport finish(const Iterate& x) {
    report_.x_final = x.x();
    report_.objective = x.objective();
    report_.wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return std::move(report_);
  }

  const Instance& inst_;
  const SolverConfig& cfg_;
  Clock::time_point start_;
  UpdateOptions opts_;
  double slack_ = 0.0;
  SolveReport report_;
};

}  // namespace

SolveReport solve(const Instance& inst, const SolverConfig& cfg) { return Run(inst, cfg).execute(); }

}  // namespace mnp
