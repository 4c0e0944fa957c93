#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mnp/oracle.hpp"
#include "mnp/solver.hpp"

namespace mnp {

/// Running worst case of one named check against a fixed bound.
class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, double bound) : name_(std::move(name)), bound_(bound) {}

  void observe(double measured) {
    ++samples_;
    if (measured > worst_) worst_ = measured;
    if (!(measured <= bound_)) ++violations_;
  }
  void merge(const CheckAccumulator& other);

  long violations() const { return violations_; }
  long samples() const { return samples_; }
  CheckResult result() const;

 private:
  std::string name_;
  double bound_;
  double worst_ = -std::numeric_limits<double>::infinity();
  long samples_ = 0;
  long violations_ = 0;
};

/// Per-solve invariant measurements gathered through SolverHooks. Objective
/// quantities are divided by 1 + ||b||², gradients by 1 + ||A||_F ||b||.
struct SolveAudit {
  long max_minor_per_major = 0;   // minor cycles after a single Update (and the start)
  long partition_repeats = 0;     // repeated (I0, I1) among stable points
  double max_increase = 0.0;      // largest objective increase along the trace / (1 + ||b||²)
  double max_pythagorean = 0.0;   // |‖Ax-Aw‖² - (‖Ax-b‖² - ‖Aw-b‖²)| at full minor steps
  double max_pg_drop_rel = 0.0;   // closed-form PG drop vs ‖z‖⁴/(2‖Az‖²), resolvable steps
  long pg_drop_checked = 0;
  double max_update_move = 0.0;   // ‖Ax-Ay‖² - (‖Ax-b‖² - ‖Ay-b‖²)
  double max_sign_product = 0.0;  // max (y(i) - x(i)) g(i); nonpositive for conforming moves
  long u2_violations = 0;         // interior segment points beating y
  double max_stable_free_gradient = 0.0;  // ‖(A^J)^T (A x - b)‖_inf at stable points
  long rank_deficient_stable = 0;         // stable points whose A^J lacks full column rank
  std::vector<Vector> stable_points;      // only when requested
};

struct AuditOptions {
  bool check_independence = false;  // rank test of A^J at every stable point
  bool keep_stable_points = false;
};

/// Runs solve() with hooks that fill `audit`.
SolveReport audited_solve(const Instance& inst, SolverConfig cfg, SolveAudit& audit,
                          const AuditOptions& options = {});

/// Dense random instance of any size (no shape constraint): A and random b
/// uniform on [-0.5, 0.5], planted b as in generate(), u = 1 when capacitated.
Instance random_small_instance(Index m, Index n, bool capacitated, std::optional<double> planted_chi,
                               std::uint64_t seed);

/// Incidence instance of a random connected digraph: a random spanning tree
/// plus extra arcs up to `arcs`, integer demands in [-3, 3] and, when
/// capacitated, integer capacities in [1, 4].
Instance random_network_instance(Index nodes, Index arcs, bool capacitated, std::uint64_t seed);

/// |p - p*| / max(p*, 1e-12).
double relative_objective_error(double objective, double p_star);

struct VerifyOptions {
  Index m = 3;
  Index n = 6;
  int instances = 12;
  std::uint64_t seed = 1;
};

/// Throws CapExceeded unless n <= 12 and n + m <= 16.
void validate(const VerifyOptions& opts);

/// Randomized invariant suite on small instances; deterministic in the seed.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

/// `PASS <name> measured=<v> bound=<v>` (or FAIL).
std::string format_check(const CheckResult& check);

}  // namespace mnp
