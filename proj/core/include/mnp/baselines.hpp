#pragma once

#include <optional>
#include <string_view>

#include "mnp/instance.hpp"
#include "mnp/solver.hpp"

namespace mnp {

/// Plain first-order reference methods. None of them terminates finitely;
/// they stop once the projected-gradient residual drops below eps.
enum class BaselineMethod {
  pg,   // projected gradient, step 1/||A||^2, exact line search on the segment
  pfg,  // accelerated projected gradient with restart on objective increase
  fw,   // Frank-Wolfe with exact line search (finite bounds)
  afw,  // away-step Frank-Wolfe (finite bounds)
};

std::string_view to_string(BaselineMethod method);

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::pg;
  double eps = 0.0;  // 0 selects default_baseline_eps(inst)
  long max_iters = 1'000'000;
  double time_limit = 60.0;
  std::optional<Vector> start;  // zero when absent; afw needs a vertex
  bool record_trace = false;
};

/// 1e-8 (1 + ||b||).
double default_baseline_eps(const Instance& inst);

/// ||x - P(x - g)||_inf where P projects onto the box.
double stationarity(const Instance& inst, const Vector& x, const Vector& g);

/// Status is `optimal` when the stationarity test passed. Iterations are
/// reported as major cycles; minor_cycles_total is always 0.
SolveReport run_baseline(const Instance& inst, const BaselineConfig& cfg);

}  // namespace mnp
