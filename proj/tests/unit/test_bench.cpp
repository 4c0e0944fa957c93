#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "mnp/bench.hpp"
#include "mnp/error.hpp"

namespace {

using mnp::BenchMethod;
using mnp::BenchPlan;

BenchPlan small_plan() {
  BenchPlan plan;
  plan.cells.push_back(mnp::BenchCell{mnp::Shape::rectangular, 4, 9, false, std::nullopt});
  plan.methods.push_back(mnp::parse_bench_method("pg:local-norm"));
  plan.runs_per_cell = 2;
  return plan;
}

int count_lines(const std::string& s, bool skip_comments) {
  std::istringstream in(s);
  std::string line;
  int n = 0;
  while (std::getline(in, line))
    if (!(skip_comments && !line.empty() && line[0] == '#')) ++n;
  return n;
}

TEST(BenchMethod, ParseAndLabels) {
  const BenchMethod pg = mnp::parse_bench_method("pg:oblivious");
  EXPECT_EQ(pg.method_label(), "pg");
  EXPECT_EQ(pg.mapping_label(), "oblivious");
  EXPECT_EQ(mnp::parse_bench_method("pg-fixed:local-norm").method_label(), "pg-fixed");
  EXPECT_EQ(mnp::parse_bench_method("coordinate:local-norm").mapping_label(), "local-norm");
  const BenchMethod pfg = mnp::parse_bench_method("baseline:pfg");
  EXPECT_EQ(pfg.method_label(), "baseline-pfg");
  EXPECT_EQ(pfg.mapping_label(), "none");
  EXPECT_THROW(mnp::parse_bench_method("pg"), mnp::ContractError);
  EXPECT_THROW(mnp::parse_bench_method("newton:oblivious"), mnp::ContractError);
  EXPECT_THROW(mnp::parse_bench_method("pg:euclid"), mnp::ContractError);
  EXPECT_THROW(mnp::parse_bench_method("baseline:lbfgs"), mnp::ContractError);
}

TEST(BenchCell, FeasibilityLabel) {
  mnp::BenchCell cell;
  EXPECT_EQ(cell.feasibility_label(), "random-b");
  cell.planted_chi = 0.5;
  EXPECT_EQ(cell.feasibility_label(), "planted(0.5)");
}

TEST(BenchPlan, Validation) {
  BenchPlan empty;
  EXPECT_THROW(mnp::validate(empty), mnp::ContractError);
  BenchPlan plan = small_plan();
  plan.methods.clear();
  EXPECT_THROW(mnp::validate(plan), mnp::ContractError);
  plan = small_plan();
  plan.cells[0].n = 5;  // rectangular needs n >= 2m
  EXPECT_THROW(mnp::validate(plan), mnp::ContractError);
}

TEST(RunBench, RowCountAndHeader) {
  const BenchPlan plan = small_plan();
  const std::vector<mnp::RunRow> rows = mnp::run_bench(plan);
  ASSERT_EQ(rows.size(), 2u);
  std::ostringstream out;
  mnp::write_runs_csv(out, rows, plan, false);
  EXPECT_EQ(count_lines(out.str(), true), 3);
  EXPECT_NE(out.str().find("cell_id,m,n,capacitated,feasibility,method,mapping,run,seed,status,objective,"
                           "major_cycles,minor_cycles,wall_ms\n"),
            std::string::npos);
  EXPECT_EQ(out.str().rfind("# baseline_eps=", 0), 0u);
  EXPECT_EQ(rows[0].status, "optimal");
}

TEST(RunBench, MethodsShareTheInstanceOfARun) {
  BenchPlan plan = small_plan();
  plan.methods.push_back(mnp::parse_bench_method("coordinate:oblivious"));
  plan.methods.push_back(mnp::parse_bench_method("baseline:pg"));
  const std::vector<mnp::RunRow> rows = mnp::run_bench(plan);
  ASSERT_EQ(rows.size(), 6u);
  for (int run = 0; run < 2; ++run) {
    const auto& a = rows[static_cast<std::size_t>(run * 3)];
    EXPECT_EQ(a.seed, mnp::run_seed(plan, 0, run));
    for (int k = 1; k < 3; ++k) {
      const auto& b = rows[static_cast<std::size_t>(run * 3 + k)];
      EXPECT_EQ(b.seed, a.seed);
      EXPECT_NEAR(b.objective, a.objective, 1e-8);
    }
  }
  EXPECT_NE(rows[0].seed, rows[3].seed);
}

TEST(RunBench, ByteStableAcrossRunsAndThreads) {
  BenchPlan plan = small_plan();
  plan.runs_per_cell = 4;
  std::ostringstream a, b;
  mnp::write_runs_csv(a, mnp::run_bench(plan), plan, false);
  plan.threads = 3;
  mnp::write_runs_csv(b, mnp::run_bench(plan), plan, false);
  EXPECT_EQ(a.str(), b.str());
}

TEST(RunBench, TimeoutIsRecordedAndCounted) {
  BenchPlan plan = small_plan();
  plan.cells[0] = mnp::BenchCell{mnp::Shape::rectangular, 30, 60, false, std::nullopt};
  plan.time_limit = 1e-9;
  const std::vector<mnp::RunRow> rows = mnp::run_bench(plan);
  for (const auto& r : rows) EXPECT_EQ(r.status, "time_limit");
  const std::vector<mnp::AggregateRow> agg = mnp::aggregate(rows);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].timeouts, 2);
  EXPECT_EQ(agg[0].runs, 2);
}

TEST(RunBench, ErrorsAreRecordedNotThrown) {
  BenchPlan plan = small_plan();
  plan.methods = {mnp::parse_bench_method("fw:local-norm")};  // uncapacitated cell
  const std::vector<mnp::RunRow> rows = mnp::run_bench(plan);
  for (const auto& r : rows) EXPECT_EQ(r.status, "error");
  EXPECT_EQ(mnp::aggregate(rows)[0].errors, 2);
}

TEST(Aggregate, MeansAreArithmetic) {
  BenchPlan plan = small_plan();
  plan.runs_per_cell = 3;
  plan.methods.push_back(mnp::parse_bench_method("coordinate:local-norm"));
  const std::vector<mnp::RunRow> rows = mnp::run_bench(plan);
  const std::vector<mnp::AggregateRow> agg = mnp::aggregate(rows);
  ASSERT_EQ(agg.size(), 2u);
  for (const mnp::AggregateRow& a : agg) {
    double major = 0.0, minor = 0.0;
    int runs = 0;
    for (const mnp::RunRow& r : rows) {
      if (r.method != a.method) continue;
      major += static_cast<double>(r.major_cycles);
      minor += static_cast<double>(r.minor_cycles);
      ++runs;
    }
    EXPECT_EQ(a.runs, runs);
    EXPECT_DOUBLE_EQ(a.mean_major_cycles, major / runs);
    EXPECT_DOUBLE_EQ(a.mean_minor_cycles, minor / runs);
  }
}

TEST(BenchThreads, FromEnvironment) {
  ::setenv("MNP_THREADS", "3", 1);
  EXPECT_EQ(mnp::bench_threads_from_env(), 3u);
  ::setenv("MNP_THREADS", "zero", 1);
  EXPECT_EQ(mnp::bench_threads_from_env(), 1u);
  ::unsetenv("MNP_THREADS");
  EXPECT_EQ(mnp::bench_threads_from_env(), 1u);
}

}  // namespace
