#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mnp/baselines.hpp"
#include "mnp/centroid.hpp"
#include "mnp/instance.hpp"
#include "mnp/updates.hpp"

namespace mnp {

struct BenchCell {
  Shape shape = Shape::rectangular;
  Index m = 100;
  Index n = 200;
  bool capacitated = false;
  std::optional<double> planted_chi;

  /// `random-b` or `planted(<chi>)`.
  std::string feasibility_label() const;
};

struct BenchMethod {
  enum class Family { framework, baseline };
  Family family = Family::framework;
  UpdateRule rule;
  MappingKind mapping = MappingKind::local_norm;
  BaselineMethod baseline = BaselineMethod::pg;

  static BenchMethod framework(UpdateKind kind, MappingKind mapping);
  static BenchMethod reference(BaselineMethod method);

  std::string method_label() const;   // pg, coordinate, fw, baseline-pfg, ...
  std::string mapping_label() const;  // oblivious, local-norm, none
};

/// Parses `pg:local-norm`, `coordinate:oblivious`, `fw:local-norm`,
/// `baseline:pfg`, ... Throws ContractError on unknown names.
BenchMethod parse_bench_method(const std::string& text);

struct BenchPlan {
  std::vector<BenchCell> cells;
  std::vector<BenchMethod> methods;
  int runs_per_cell = 5;
  double time_limit = 60.0;
  std::uint64_t seed = 1;
  double opt_tol = 0.0;   // 0: solver default
  double snap_tol = kDefaultSnapTol;
  double baseline_eps = 0.0;  // 0: baseline default
  unsigned threads = 1;
};

void validate(const BenchPlan& plan);

struct RunRow {
  int cell_id = 0;
  BenchCell cell;
  std::string method;
  std::string mapping;
  int run = 0;
  std::uint64_t seed = 0;
  std::string status;  // optimal, iteration_cap, time_limit, error
  double objective = 0.0;
  long major_cycles = 0;
  long minor_cycles = 0;
  double wall_ms = 0.0;
};

struct AggregateRow {
  int cell_id = 0;
  BenchCell cell;
  std::string method;
  std::string mapping;
  int runs = 0;
  double mean_objective = 0.0;
  double mean_major_cycles = 0.0;
  double mean_minor_cycles = 0.0;
  double mean_wall_ms = 0.0;
  int timeouts = 0;
  int errors = 0;
};

/// Seed of run `run` in cell `cell_id`; every method of that run sees the
/// same instance.
std::uint64_t run_seed(const BenchPlan& plan, int cell_id, int run);

/// Rows come back in plan order (cell, run, method) regardless of threading.
std::vector<RunRow> run_bench(const BenchPlan& plan);
std::vector<AggregateRow> aggregate(const std::vector<RunRow>& rows);

/// With include_timing = false wall-clock columns are written as 0 so the
/// output is byte-stable for a fixed plan.
void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows, const BenchPlan& plan,
                    bool include_timing = true);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows,
                         bool include_timing = true);

/// MNP_THREADS when set to a positive integer, otherwise 1.
unsigned bench_threads_from_env();

}  // namespace mnp
