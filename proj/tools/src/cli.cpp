#include "mnp_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mnp/baselines.hpp"
#include "mnp/bench.hpp"
#include "mnp/error.hpp"
#include "mnp/instance.hpp"
#include "mnp/solver.hpp"
#include "mnp/verify.hpp"

namespace mnp::cli {
namespace {

struct Globals {
  std::uint64_t seed = 1;
  double time_limit = 60.0;
  double opt_tol = 0.0;
  double snap_tol = kDefaultSnapTol;
};

struct GenerateArgs {
  std::string shape = "rect";
  Index m = 0;
  std::optional<Index> n;
  bool capacitated = false;
  std::optional<double> feasible;
  std::string output;
};

struct SolveArgs {
  std::string input;
  std::string rule = "pg";
  std::string mapping = "local-norm";
  std::string trace;
};

struct BenchArgs {
  std::string shape = "rect";
  std::vector<Index> m{100};
  std::vector<Index> n{200};
  bool capacitated = false;
  std::optional<double> feasible;
  int runs = 5;
  std::vector<std::string> methods{"coordinate:local-norm", "pg:local-norm", "pg:oblivious"};
  std::optional<double> baseline_eps;
  std::string output;
  std::string aggregate_output;
  bool no_timing = false;
};

struct VerifyArgs {
  Index m = 3;
  Index n = 6;
  int instances = 12;
};

Shape parse_shape(const std::string& s) { return s == "near-square" ? Shape::near_square : Shape::rectangular; }

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  fn(file);
  if (!file) throw Error("write to '" + path + "' failed");
}

int cmd_generate(const Globals& g, const GenerateArgs& a, std::ostream& out) {
  GeneratorSpec spec;
  spec.shape = parse_shape(a.shape);
  spec.m = a.m;
  spec.n = a.n ? *a.n : (spec.shape == Shape::near_square ? near_square_cols(a.m, 1.1) : 2 * a.m);
  spec.capacitated = a.capacitated;
  spec.planted_chi = a.feasible;
  spec.seed = g.seed;
  const Instance inst = generate(spec);
  emit(a.output, out, [&](std::ostream& os) { write_instance(os, inst); });
  return ok;
}

void write_trace(std::ostream& os, const SolveReport& rep) {
  os << "index,kind,objective_after,lower,upper,free,alpha_star,moved,direction_norm\n";
  for (std::size_t k = 0; k < rep.trace.size(); ++k) {
    const TraceEvent& ev = rep.trace[k];
    os << k << ',' << to_string(ev.kind) << ',' << real(ev.objective_after) << ',' << ev.sizes.lower << ','
       << ev.sizes.upper << ',' << ev.sizes.free << ',' << (ev.alpha_star ? real(*ev.alpha_star) : "")
       << ',' << (ev.moved ? 1 : 0) << ',' << real(ev.direction_norm) << '\n';
  }
}

int cmd_solve(const Globals& g, const SolveArgs& a, std::ostream& out) {
  const Instance inst = read_instance_file(a.input);
  SolverConfig cfg;
  if (a.rule == "pg") {
    cfg.rule.kind = UpdateKind::projected_gradient;
  } else if (a.rule == "pg-fixed") {
    cfg.rule.kind = UpdateKind::projected_gradient;
    cfg.rule.pg_step = PgStep::fixed;
  } else if (a.rule == "coordinate") {
    cfg.rule.kind = UpdateKind::coordinate;
  } else {
    cfg.rule.kind = UpdateKind::frank_wolfe;
  }
  cfg.mapping.kind = a.mapping == "oblivious" ? MappingKind::oblivious : MappingKind::local_norm;
  cfg.opt_tol = g.opt_tol;
  cfg.snap_tol = g.snap_tol;
  cfg.time_limit = g.time_limit;
  cfg.record_trace = !a.trace.empty();

  const SolveReport rep = solve(inst, cfg);
  out << "status: " << to_string(rep.status) << '\n'
      << "objective: " << real(rep.objective) << '\n'
      << "major_cycles: " << rep.major_cycles << '\n'
      << "minor_cycles: " << rep.minor_cycles_total << '\n';
  char ms[40];
  std::snprintf(ms, sizeof ms, "%.3f", rep.wall_ms);
  out << "wall_ms: " << ms << '\n';
  if (!a.trace.empty()) emit(a.trace, out, [&](std::ostream& os) { write_trace(os, rep); });
  return ok;
}

int cmd_bench(const Globals& g, const BenchArgs& a, std::ostream& out) {
  if (a.m.size() != a.n.size()) throw ContractError("bench: --m and --n need the same number of values");
  BenchPlan plan;
  for (std::size_t k = 0; k < a.m.size(); ++k) {
    plan.cells.push_back(BenchCell{parse_shape(a.shape), a.m[k], a.n[k], a.capacitated, a.feasible});
  }
  for (const std::string& text : a.methods) plan.methods.push_back(parse_bench_method(text));
  plan.runs_per_cell = a.runs;
  plan.time_limit = g.time_limit;
  plan.seed = g.seed;
  plan.opt_tol = g.opt_tol;
  plan.snap_tol = g.snap_tol;
  if (a.baseline_eps) plan.baseline_eps = *a.baseline_eps;
  plan.threads = bench_threads_from_env();

  const std::vector<RunRow> rows = run_bench(plan);
  const bool timing = !a.no_timing;
  emit(a.output, out, [&](std::ostream& os) { write_runs_csv(os, rows, plan, timing); });
  if (!a.aggregate_output.empty()) {
    emit(a.aggregate_output, out, [&](std::ostream& os) { write_aggregate_csv(os, aggregate(rows), timing); });
  }
  return ok;
}

int cmd_verify(const Globals& g, const VerifyArgs& a, std::ostream& out) {
  VerifyOptions opts;
  opts.m = a.m;
  opts.n = a.n;
  opts.instances = a.instances;
  opts.seed = g.seed;
  bool all_pass = true;
  for (const CheckResult& check : run_verification(opts)) {
    out << format_check(check) << '\n';
    all_pass = all_pass && check.pass;
  }
  return all_pass ? ok : check_failure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Box-constrained least squares via update-and-stabilize"};
  app.name("mnp");
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--time-limit", g.time_limit, "Wall-clock limit per solve, seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--opt-tol", g.opt_tol, "Optimality tolerance (0: 1e-9 (1 + ||b||))")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--snap-tol", g.snap_tol, "Bound snapping tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.fallthrough();

  const std::vector<std::string> shapes{"rect", "near-square"};

  GenerateArgs gen;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Write a random instance");
  generate_cmd->add_option("--shape", gen.shape)->check(CLI::IsMember(shapes))->capture_default_str();
  generate_cmd->add_option("--m", gen.m, "Rows")->required()->check(CLI::PositiveNumber);
  generate_cmd->add_option("--n", gen.n, "Columns (default 2m, or round(1.1m) for near-square)")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_flag("--capacitated", gen.capacitated, "Upper bounds u = 1");
  generate_cmd->add_option("--feasible", gen.feasible, "Planted feasible b with support density chi")
      ->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("-o,--output", gen.output, "Output file (stdout when absent)");

  SolveArgs sol;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("instance", sol.input)->required();
  solve_cmd->add_option("--rule", sol.rule)
      ->check(CLI::IsMember({"pg", "pg-fixed", "coordinate", "fw"}))
      ->capture_default_str();
  solve_cmd->add_option("--mapping", sol.mapping)
      ->check(CLI::IsMember({"local-norm", "oblivious"}))
      ->capture_default_str();
  solve_cmd->add_option("--trace", sol.trace, "Write the cycle trace as CSV");

  BenchArgs ben;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a solver/baseline matrix and write CSV");
  bench_cmd->add_option("--shape", ben.shape)->check(CLI::IsMember(shapes))->capture_default_str();
  bench_cmd->add_option("--m", ben.m, "Rows, one per cell")->capture_default_str();
  bench_cmd->add_option("--n", ben.n, "Columns, one per cell")->capture_default_str();
  bench_cmd->add_flag("--capacitated", ben.capacitated);
  bench_cmd->add_option("--feasible", ben.feasible)->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--runs", ben.runs)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--methods", ben.methods, "rule:mapping or baseline:name")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--baseline-eps", ben.baseline_eps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", ben.output, "Per-run CSV (stdout when absent)");
  bench_cmd->add_option("--aggregate", ben.aggregate_output, "Per-cell means CSV");
  bench_cmd->add_flag("--no-timing", ben.no_timing, "Write wall_ms as 0 for byte-stable output");

  VerifyArgs ver;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the invariant suite on small random instances");
  verify_cmd->add_option("--m", ver.m)->check(CLI::PositiveNumber)->capture_default_str();
  verify_cmd->add_option("--n", ver.n)->check(CLI::PositiveNumber)->capture_default_str();
  verify_cmd->add_option("--instances", ver.instances)->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage_error;
  }

  try {
    if (*generate_cmd) return cmd_generate(g, gen, out);
    if (*solve_cmd) return cmd_solve(g, sol, out);
    if (*bench_cmd) return cmd_bench(g, ben, out);
    return cmd_verify(g, ver, out);
  } catch (const NumericalFault& e) {
    err << "error: " << e.what() << '\n';
    return check_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  }
}

}  // namespace mnp::cli
