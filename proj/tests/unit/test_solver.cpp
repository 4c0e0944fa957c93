#include <gtest/gtest.h>

#include <limits>

#include "mnp/error.hpp"
#include "mnp/oracle.hpp"
#include "mnp/solver.hpp"

namespace {

using mnp::Instance;
using mnp::MappingKind;
using mnp::Matrix;
using mnp::SolveStatus;
using mnp::UpdateKind;
using mnp::Vector;

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<mnp::Index>(v.size()));
  mnp::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

mnp::SolverConfig config(UpdateKind kind, MappingKind mapping) {
  mnp::SolverConfig cfg;
  cfg.rule.kind = kind;
  cfg.mapping.kind = mapping;
  return cfg;
}

TEST(AlphaStar, HandValues) {
  EXPECT_DOUBLE_EQ(mnp::alpha_star(vec({0.5}), vec({2}), vec({1})), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(mnp::alpha_star(vec({0.5}), vec({0.8}), vec({1})), 1.0);
  EXPECT_DOUBLE_EQ(mnp::alpha_star(vec({0.5}), vec({-0.5}), vec({kInf})), 0.5);
}

TEST(BoundaryStep, ReportsBlockingCoordinates) {
  const mnp::BoundaryStep s = mnp::boundary_step(vec({0.5, 0.5, 0.2}), vec({-0.5, 1.5, 0.3}), vec({1, 1, 1}));
  EXPECT_DOUBLE_EQ(s.alpha, 0.5);
  EXPECT_EQ(s.blocking_lower, std::vector<mnp::Index>{0});
  EXPECT_EQ(s.blocking_upper, std::vector<mnp::Index>{1});
}

TEST(Solve, OptimalOriginTakesOneMajorCycle) {
  const Instance inst = Instance::nnls(Matrix::Identity(2, 2), vec({-1, -2}));
  const mnp::SolveReport rep = mnp::solve(inst, {});
  EXPECT_EQ(rep.status, SolveStatus::optimal);
  EXPECT_EQ(rep.major_cycles, 1);
  EXPECT_EQ(rep.minor_cycles_total, 0);
  ASSERT_EQ(rep.trace.size(), 1u);
  EXPECT_FALSE(rep.trace[0].moved);
  EXPECT_EQ(rep.x_final, Vector::Zero(2));
}

TEST(Solve, SeparableExactFit) {
  const Instance inst = Instance::nnls(Matrix::Identity(2, 2), vec({1, 2}));
  for (UpdateKind kind : {UpdateKind::projected_gradient, UpdateKind::coordinate}) {
    const mnp::SolveReport rep = mnp::solve(inst, config(kind, MappingKind::local_norm));
    EXPECT_EQ(rep.status, SolveStatus::optimal);
    EXPECT_TRUE(rep.x_final.isApprox(vec({1, 2}), 1e-14));
    EXPECT_LT(rep.objective, 1e-28);
  }
}

TEST(Solve, FrankWolfeNeedsFiniteBounds) {
  const Instance inst = Instance::nnls(Matrix::Identity(2, 2), vec({1, 2}));
  EXPECT_THROW(mnp::solve(inst, config(UpdateKind::frank_wolfe, MappingKind::oblivious)), mnp::ContractError);
}

TEST(Solve, StartPoint) {
  const Instance inst(Matrix::Identity(2, 2), vec({0.5, 2}), vec({1, 1}));
  mnp::SolverConfig cfg;
  cfg.start = vec({1, 0.3});
  const mnp::SolveReport rep = mnp::solve(inst, cfg);
  EXPECT_TRUE(rep.x_final.isApprox(vec({0.5, 1}), 1e-14));
  cfg.start = vec({2, 0});
  EXPECT_THROW(mnp::solve(inst, cfg), mnp::ContractError);
}

TEST(Solve, IterationCapAndTimeLimit) {
  const Instance inst = mnp::generate({mnp::Shape::rectangular, 10, 30, false, std::nullopt, 4});
  mnp::SolverConfig capped;
  capped.max_major = 1;
  EXPECT_EQ(mnp::solve(inst, capped).status, SolveStatus::iteration_cap);
  mnp::SolverConfig timed;
  timed.time_limit = 1e-12;
  EXPECT_EQ(mnp::solve(inst, timed).status, SolveStatus::time_limit);
}

TEST(Solve, TraceMatchesCounters) {
  const Instance inst = mnp::generate({mnp::Shape::rectangular, 6, 14, true, std::nullopt, 8});
  const mnp::SolveReport rep = mnp::solve(inst, config(UpdateKind::frank_wolfe, MappingKind::local_norm));
  long majors = 0, minors = 0;
  double prev = rep.initial_objective;
  for (const mnp::TraceEvent& ev : rep.trace) {
    (ev.kind == mnp::CycleKind::major_update ? majors : minors)++;
    EXPECT_LE(ev.objective_after, prev + 1e-12);
    EXPECT_EQ(ev.alpha_star.has_value(), ev.kind == mnp::CycleKind::minor_centroid);
    prev = ev.objective_after;
  }
  EXPECT_EQ(majors, rep.major_cycles);
  EXPECT_EQ(minors, rep.minor_cycles_total);
  EXPECT_DOUBLE_EQ(rep.objective, rep.trace.back().objective_after);
}

TEST(Solve, HooksSeeEveryCycle) {
  const Instance inst = mnp::generate({mnp::Shape::rectangular, 5, 10, false, std::nullopt, 2});
  mnp::SolverConfig cfg;
  long updates = 0, minors = 0, stables = 0;
  cfg.hooks.on_update = [&](const mnp::Iterate&, const mnp::UpdateResult&) { ++updates; };
  cfg.hooks.on_minor = [&](const mnp::Iterate&, const Vector&, double, const mnp::Iterate&) { ++minors; };
  cfg.hooks.on_stable = [&](const mnp::Iterate&) { ++stables; };
  const mnp::SolveReport rep = mnp::solve(inst, cfg);
  EXPECT_EQ(updates, rep.major_cycles);
  EXPECT_EQ(minors, rep.minor_cycles_total);
  // The start point and the close of every moving major cycle.
  EXPECT_EQ(stables, rep.major_cycles);
}

struct Variant {
  UpdateKind kind;
  MappingKind mapping;
  bool capacitated;
};

class SolveMatchesOracle : public ::testing::TestWithParam<Variant> {};

TEST_P(SolveMatchesOracle, RandomInstances) {
  const Variant v = GetParam();
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::optional<double> chi = seed % 3 == 0 ? std::optional<double>(0.5) : std::nullopt;
    const Instance inst = mnp::generate({mnp::Shape::rectangular, 3, 7, v.capacitated, chi, seed});
    const mnp::OptimumCertificate cert = mnp::brute_force_optimum(inst);
    const mnp::SolveReport rep = mnp::solve(inst, config(v.kind, v.mapping));
    ASSERT_EQ(rep.status, SolveStatus::optimal) << "seed " << seed;
    EXPECT_NEAR(rep.objective, cert.p_star, 1e-10 * std::max(cert.p_star, 1e-12) + 1e-22) << "seed " << seed;
    EXPECT_TRUE((inst.a() * rep.x_final).isApprox(cert.b_star, 1e-7) || cert.b_star.isZero(1e-12));
    EXPECT_LE(rep.major_cycles, 2187);  // 3^7
  }
}

INSTANTIATE_TEST_SUITE_P(
    Variants, SolveMatchesOracle,
    ::testing::Values(Variant{UpdateKind::projected_gradient, MappingKind::oblivious, false},
                      Variant{UpdateKind::projected_gradient, MappingKind::local_norm, false},
                      Variant{UpdateKind::coordinate, MappingKind::oblivious, false},
                      Variant{UpdateKind::coordinate, MappingKind::local_norm, false},
                      Variant{UpdateKind::projected_gradient, MappingKind::local_norm, true},
                      Variant{UpdateKind::coordinate, MappingKind::oblivious, true},
                      Variant{UpdateKind::frank_wolfe, MappingKind::oblivious, true},
                      Variant{UpdateKind::frank_wolfe, MappingKind::local_norm, true}));

TEST(Solve, FixedStepPgOnNnls) {
  const Instance inst = mnp::generate({mnp::Shape::rectangular, 3, 7, false, std::nullopt, 12});
  mnp::SolverConfig cfg;
  cfg.rule.pg_step = mnp::PgStep::fixed;
  const mnp::SolveReport rep = mnp::solve(inst, cfg);
  EXPECT_NEAR(rep.objective, mnp::brute_force_optimum(inst).p_star, 1e-10);
}

TEST(ToString, Names) {
  EXPECT_EQ(mnp::to_string(SolveStatus::time_limit), "time_limit");
  EXPECT_EQ(mnp::to_string(SolveStatus::iteration_cap), "iteration_cap");
  EXPECT_EQ(mnp::to_string(mnp::CycleKind::minor_centroid), "minor_centroid");
}

}  // namespace
