#include "mnp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "mnp/error.hpp"
#include "mnp/rng.hpp"
#include "mnp/solver.hpp"

namespace mnp {

std::string BenchCell::feasibility_label() const {
  if (!planted_chi) return "random-b";
  char buf[48];
  std::snprintf(buf, sizeof buf, "planted(%g)", *planted_chi);
  return buf;
}

BenchMethod BenchMethod::framework(UpdateKind kind, MappingKind mapping) {
  BenchMethod m;
  m.family = Family::framework;
  m.rule.kind = kind;
  m.mapping = mapping;
  return m;
}

BenchMethod BenchMethod::reference(BaselineMethod method) {
  BenchMethod m;
  m.family = Family::baseline;
  m.baseline = method;
  return m;
}

std::string BenchMethod::method_label() const {
  if (family == Family::baseline) return "baseline-" + std::string(to_string(baseline));
  switch (rule.kind) {
    case UpdateKind::projected_gradient:
      return rule.pg_step == PgStep::fixed ? "pg-fixed" : "pg";
    case UpdateKind::coordinate: return "coordinate";
    case UpdateKind::frank_wolfe: return "fw";
  }
  return "unknown";
}

std::string BenchMethod::mapping_label() const {
  if (family == Family::baseline) return "none";
  return mapping == MappingKind::oblivious ? "oblivious" : "local-norm";
}

BenchMethod parse_bench_method(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ContractError("bench method '" + text + "': expected <rule>:<mapping> or baseline:<name>");
  }
  const std::string head = text.substr(0, colon);
  const std::string tail = text.substr(colon + 1);
  if (head == "baseline") {
    static const std::map<std::string, BaselineMethod> names{
        {"pg", BaselineMethod::pg}, {"pfg", BaselineMethod::pfg},
        {"fw", BaselineMethod::fw}, {"afw", BaselineMethod::afw}};
    const auto it = names.find(tail);
    if (it == names.end()) throw ContractError("unknown baseline '" + tail + "'");
    return BenchMethod::reference(it->second);
  }
  MappingKind mapping;
  if (tail == "local-norm") mapping = MappingKind::local_norm;
  else if (tail == "oblivious") mapping = MappingKind::oblivious;
  else throw ContractError("unknown centroid mapping '" + tail + "'");

  BenchMethod m;
  if (head == "pg") m = BenchMethod::framework(UpdateKind::projected_gradient, mapping);
  else if (head == "pg-fixed") {
    m = BenchMethod::framework(UpdateKind::projected_gradient, mapping);
    m.rule.pg_step = PgStep::fixed;
  } else if (head == "coordinate") m = BenchMethod::framework(UpdateKind::coordinate, mapping);
  else if (head == "fw") m = BenchMethod::framework(UpdateKind::frank_wolfe, mapping);
  else throw ContractError("unknown update rule '" + head + "'");
  return m;
}

void validate(const BenchPlan& plan) {
  if (plan.cells.empty()) throw ContractError("bench plan: no cells");
  if (plan.methods.empty()) throw ContractError("bench plan: no methods");
  if (plan.runs_per_cell < 1) throw ContractError("bench plan: runs per cell must be positive");
  if (!(plan.time_limit > 0.0)) throw ContractError("bench plan: time limit must be positive");
  for (const BenchCell& cell : plan.cells) {
    GeneratorSpec spec{cell.shape, cell.m, cell.n, cell.capacitated, cell.planted_chi, 0};
    validate(spec);
  }
}

std::uint64_t run_seed(const BenchPlan& plan, int cell_id, int run) {
  return derive_seed(plan.seed, static_cast<std::uint64_t>(cell_id), static_cast<std::uint64_t>(run));
}

namespace {

RunRow run_one(const BenchPlan& plan, const Instance& inst, const BenchMethod& method) {
  RunRow row;
  row.method = method.method_label();
  row.mapping = method.mapping_label();
  try {
    SolveReport rep;
    if (method.family == BenchMethod::Family::framework) {
      SolverConfig cfg;
      cfg.rule = method.rule;
      cfg.mapping.kind = method.mapping;
      cfg.opt_tol = plan.opt_tol;
      cfg.snap_tol = plan.snap_tol;
      cfg.time_limit = plan.time_limit;
      cfg.record_trace = false;
      rep = solve(inst, cfg);
    } else {
      BaselineConfig cfg;
      cfg.method = method.baseline;
      cfg.eps = plan.baseline_eps;
      cfg.time_limit = plan.time_limit;
      rep = run_baseline(inst, cfg);
    }
    row.status = std::string(to_string(rep.status));
    row.objective = rep.objective;
    row.major_cycles = rep.major_cycles;
    row.minor_cycles = rep.minor_cycles_total;
    row.wall_ms = rep.wall_ms;
  } catch (const Error&) {
    row.status = "error";
  }
  return row;
}

}  // namespace

std::vector<RunRow> run_bench(const BenchPlan& plan) {
  validate(plan);
  const int runs = plan.runs_per_cell;
  const std::size_t methods = plan.methods.size();
  const std::size_t jobs = plan.cells.size() * static_cast<std::size_t>(runs);
  std::vector<RunRow> rows(jobs * methods);

  auto do_job = [&](std::size_t job) {
    const int cell_id = static_cast<int>(job / static_cast<std::size_t>(runs));
    const int run = static_cast<int>(job % static_cast<std::size_t>(runs));
    const BenchCell& cell = plan.cells[static_cast<std::size_t>(cell_id)];
    const std::uint64_t seed = run_seed(plan, cell_id, run);
    const Instance inst =
        generate(GeneratorSpec{cell.shape, cell.m, cell.n, cell.capacitated, cell.planted_chi, seed});
    for (std::size_t k = 0; k < methods; ++k) {
      RunRow row = run_one(plan, inst, plan.methods[k]);
      row.cell_id = cell_id;
      row.cell = cell;
      row.run = run;
      row.seed = seed;
      rows[job * methods + k] = std::move(row);
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(plan.threads, static_cast<unsigned>(jobs)));
  if (workers == 1) {
    for (std::size_t job = 0; job < jobs; ++job) do_job(job);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t job = next++; job < jobs; job = next++) do_job(job);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& rows) {
  std::vector<AggregateRow> out;
  std::map<std::tuple<int, std::string, std::string>, std::size_t> slot;
  for (const RunRow& r : rows) {
    const auto key = std::make_tuple(r.cell_id, r.method, r.mapping);
    auto [it, inserted] = slot.emplace(key, out.size());
    if (inserted) {
      AggregateRow a;
      a.cell_id = r.cell_id;
      a.cell = r.cell;
      a.method = r.method;
      a.mapping = r.mapping;
      out.push_back(a);
    }
    AggregateRow& a = out[it->second];
    ++a.runs;
    a.mean_objective += r.objective;
    a.mean_major_cycles += static_cast<double>(r.major_cycles);
    a.mean_minor_cycles += static_cast<double>(r.minor_cycles);
    a.mean_wall_ms += r.wall_ms;
    if (r.status == "time_limit") ++a.timeouts;
    if (r.status == "error") ++a.errors;
  }
  for (AggregateRow& a : out) {
    const double k = a.runs;
    a.mean_objective /= k;
    a.mean_major_cycles /= k;
    a.mean_minor_cycles /= k;
    a.mean_wall_ms /= k;
  }
  return out;
}

namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string millis(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows, const BenchPlan& plan,
                    bool include_timing) {
  out << "# baseline_eps=" << (plan.baseline_eps > 0.0 ? real(plan.baseline_eps) : "1e-8*(1+||b||)")
      << " time_limit_s=" << real(plan.time_limit) << " seed=" << plan.seed << '\n';
  out << "cell_id,m,n,capacitated,feasibility,method,mapping,run,seed,status,objective,"
         "major_cycles,minor_cycles,wall_ms\n";
  for (const RunRow& r : rows) {
    out << r.cell_id << ',' << r.cell.m << ',' << r.cell.n << ',' << (r.cell.capacitated ? 1 : 0)
        << ',' << r.cell.feasibility_label() << ',' << r.method << ',' << r.mapping << ',' << r.run
        << ',' << r.seed << ',' << r.status << ',' << real(r.objective) << ',' << r.major_cycles
        << ',' << r.minor_cycles << ',' << (include_timing ? millis(r.wall_ms) : "0") << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows, bool include_timing) {
  out << "cell_id,m,n,capacitated,feasibility,method,mapping,runs,mean_objective,"
         "mean_major_cycles,mean_minor_cycles,mean_wall_ms,timeouts,errors\n";
  for (const AggregateRow& a : rows) {
    out << a.cell_id << ',' << a.cell.m << ',' << a.cell.n << ',' << (a.cell.capacitated ? 1 : 0)
        << ',' << a.cell.feasibility_label() << ',' << a.method << ',' << a.mapping << ',' << a.runs
        << ',' << real(a.mean_objective) << ',' << real(a.mean_major_cycles) << ','
        << real(a.mean_minor_cycles) << ',' << (include_timing ? millis(a.mean_wall_ms) : "0") << ','
        << a.timeouts << ',' << a.errors << '\n';
  }
}

unsigned bench_threads_from_env() {
  const char* value = std::getenv("MNP_THREADS");
  if (!value) return 1;
  char* end = nullptr;
  const long parsed = std::strtol(value, &end, 10);
  if (end == value || *end != '\0' || parsed < 1) return 1;
  return static_cast<unsigned>(parsed);
}

}  // namespace mnp
