#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "mnp/centroid.hpp"
#include "mnp/instance.hpp"
#include "mnp/iterate.hpp"
#include "mnp/updates.hpp"

namespace mnp {

enum class CycleKind { major_update, minor_centroid };

struct TraceEvent {
  CycleKind kind = CycleKind::major_update;
  double objective_after = 0.0;
  PartitionSizes sizes;
  std::optional<double> alpha_star;  // minor cycles only
  bool moved = true;                 // major cycles: Update moved the point
  double direction_norm = 0.0;       // major cycles: see UpdateResult
};

enum class SolveStatus { optimal, iteration_cap, time_limit };

std::string_view to_string(SolveStatus status);
std::string_view to_string(CycleKind kind);

struct SolveReport {
  Vector x_final;
  double objective = 0.0;
  double initial_objective = 0.0;
  SolveStatus status = SolveStatus::iteration_cap;
  long major_cycles = 0;
  long minor_cycles_total = 0;
  std::vector<TraceEvent> trace;
  double wall_ms = 0.0;
};

/// Optional callbacks for instrumentation. They observe the exact iterates
/// the solver works with and must not throw.
struct SolverHooks {
  std::function<void(const Iterate& before, const UpdateResult& update)> on_update;
  std::function<void(const Iterate& before, const Vector& centroid, double alpha,
                     const Iterate& after)> on_minor;
  /// Called with the stable point closing each major cycle (and the
  /// stabilized start point).
  std::function<void(const Iterate& stable)> on_stable;
};

struct SolverConfig {
  UpdateRule rule;
  CentroidMapping mapping;
  std::optional<Vector> start;  // zero when absent
  double opt_tol = 0.0;         // 0 selects default_opt_tol(inst)
  double snap_tol = kDefaultSnapTol;
  long max_major = 1'000'000;
  long max_minor_total = 100'000'000;
  double time_limit = 60.0;  // seconds, checked between cycles
  bool record_trace = true;
  SolverHooks hooks;
};

/// Largest alpha in [0, 1] with x + alpha (w - x) inside [0, u].
double alpha_star(const Vector& x, const Vector& w, const Vector& u);

struct BoundaryStep {
  double alpha = 1.0;
  std::vector<Index> blocking_lower;  // coordinates reaching 0 at alpha
  std::vector<Index> blocking_upper;  // coordinates reaching u at alpha
};

/// alpha_star together with the coordinates attaining the minimum ratio.
BoundaryStep boundary_step(const Vector& x, const Vector& w, const Vector& u);

/// Update-and-stabilize: alternate Update (major cycle) with centroid
/// projections clamped to the box (minor cycles) until Update leaves the
/// point in place. The start point is stabilized before the first Update, so
/// every Update is applied at a stable point. Throws NumericalFault when the objective increases by more than
/// 1e-8 (1 + ||b||^2) or a boundary step fails to fix a new coordinate.
SolveReport solve(const Instance& inst, const SolverConfig& cfg);

}  // namespace mnp
