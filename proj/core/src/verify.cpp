#include "mnp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "mnp/centroid.hpp"
#include "mnp/error.hpp"
#include "mnp/rng.hpp"

namespace mnp {

void CheckAccumulator::merge(const CheckAccumulator& other) {
  samples_ += other.samples_;
  violations_ += other.violations_;
  worst_ = std::max(worst_, other.worst_);
}

CheckResult CheckAccumulator::result() const {
  return CheckResult{name_, violations_ == 0, samples_ > 0 ? worst_ : 0.0, bound_};
}

namespace {

Matrix free_columns(const Instance& inst, const std::vector<Index>& free) {
  Matrix cols(inst.rows(), static_cast<Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) cols.col(static_cast<Index>(k)) = inst.a().col(free[k]);
  return cols;
}

}  // namespace

SolveReport audited_solve(const Instance& inst, SolverConfig cfg, SolveAudit& audit,
                          const AuditOptions& options) {
  const double scale = 1.0 + inst.b().squaredNorm();
  const double grad_scale = 1.0 + inst.a().norm() * inst.b().norm();
  const bool closed_form_pg = cfg.rule.kind == UpdateKind::projected_gradient && inst.is_nnls() &&
                              cfg.rule.pg_step == PgStep::optimal_line_search;
  long minors = 0;
  std::set<std::vector<BoundState>> seen;

  cfg.hooks.on_update = [&](const Iterate& x, const UpdateResult& upd) {
    minors = 0;
    if (!upd.moved) return;
    const Iterate& y = upd.y;
    const double drop = x.objective() - y.objective();
    audit.max_increase = std::max(audit.max_increase, -drop / scale);
    const Vector ay_minus_ax = y.residual() - x.residual();
    audit.max_update_move = std::max(audit.max_update_move, (ay_minus_ax.squaredNorm() - 2.0 * drop) / scale);

    const Vector g = gradient(inst, x);
    const Vector step = y.x() - x.x();
    audit.max_sign_product = std::max(audit.max_sign_product, step.cwiseProduct(g).maxCoeff() / scale);

    const double slack = 1e-12 * scale;
    for (int k = 0; k < 10; ++k) {
      const double lambda = 0.1 * k;
      const Vector r = x.residual() + lambda * ay_minus_ax;
      if (0.5 * r.squaredNorm() < y.objective() - slack) ++audit.u2_violations;
    }

    if (closed_form_pg) {
      const Vector z = pg_direction(inst, x);
      const double zz = z.squaredNorm();
      const double azz = (inst.a() * z).squaredNorm();
      const double expected = zz * zz / (2.0 * azz);
      // Drops far below the objective are lost to cancellation in f(x) - f(y).
      if (expected >= 1e-6 * x.objective()) {
        audit.max_pg_drop_rel = std::max(audit.max_pg_drop_rel, std::abs(drop - expected) / expected);
        ++audit.pg_drop_checked;
      }
    }
  };

  cfg.hooks.on_minor = [&](const Iterate& x, const Vector& w, double alpha, const Iterate& after) {
    ++minors;
    audit.max_minor_per_major = std::max(audit.max_minor_per_major, minors);
    audit.max_increase = std::max(audit.max_increase, (after.objective() - x.objective()) / scale);
    if (alpha == 1.0) {
      const Vector rw = inst.a() * w - inst.b();
      const double lhs = (rw - x.residual()).squaredNorm();
      const double rhs = x.residual().squaredNorm() - rw.squaredNorm();
      audit.max_pythagorean = std::max(audit.max_pythagorean, std::abs(lhs - rhs) / scale);
    }
  };

  cfg.hooks.on_stable = [&](const Iterate& it) {
    if (!seen.insert(it.states()).second) ++audit.partition_repeats;
    audit.max_stable_free_gradient =
        std::max(audit.max_stable_free_gradient, free_gradient_norm(inst, it) / grad_scale);
    if (options.check_independence) {
      const std::vector<Index> free = it.free_indices();
      if (!free.empty() && numerical_rank(free_columns(inst, free)) < static_cast<Index>(free.size())) {
        ++audit.rank_deficient_stable;
      }
    }
    if (options.keep_stable_points) audit.stable_points.push_back(it.x());
  };

  SolveReport report = solve(inst, cfg);
  audit.max_increase = std::max(audit.max_increase, 0.0);
  return report;
}

double relative_objective_error(double objective, double p_star) {
  return std::abs(objective - p_star) / std::max(p_star, 1e-12);
}

void validate(const VerifyOptions& opts) {
  if (opts.m < 1 || opts.n < 1 || opts.instances < 1) {
    throw ContractError("verify: m, n and instance count must be positive");
  }
  if (opts.n > kBruteForceMaxCols) {
    throw CapExceeded("verify: n = " + std::to_string(opts.n) + " exceeds the brute-force limit n <= " +
                      std::to_string(kBruteForceMaxCols));
  }
  if (opts.n + opts.m > kCircuitMaxColumns) {
    throw CapExceeded("verify: n + m = " + std::to_string(opts.n + opts.m) +
                      " exceeds the circuit enumeration limit n + m <= " + std::to_string(kCircuitMaxColumns));
  }
}

Instance random_small_instance(Index m, Index n, bool capacitated, std::optional<double> planted_chi,
                               std::uint64_t seed) {
  Rng matrix_rng(seed, Rng::matrix);
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = matrix_rng.uniform(-0.5, 0.5);
  Vector b(m);
  if (planted_chi) {
    Rng support_rng(seed, Rng::support);
    Rng coef_rng(seed, Rng::coefficients);
    b.setZero();
    for (Index j = 0; j < n; ++j) {
      if (support_rng.bernoulli(*planted_chi)) b += a.col(j) * coef_rng.unit();
    }
  } else {
    Rng rhs_rng(seed, Rng::rhs);
    for (Index i = 0; i < m; ++i) b[i] = rhs_rng.uniform(-0.5, 0.5);
  }
  const double bound = capacitated ? 1.0 : std::numeric_limits<double>::infinity();
  return Instance(std::move(a), std::move(b), Vector::Constant(n, bound));
}

Instance random_network_instance(Index nodes, Index arcs, bool capacitated, std::uint64_t seed) {
  if (nodes < 2 || arcs < nodes - 1) throw ContractError("random_network_instance: too few arcs for a tree");
  Rng rng(seed, Rng::matrix);
  std::vector<Arc> list;
  for (Index v = 1; v < nodes; ++v) {
    const auto parent = static_cast<Index>(rng.below(static_cast<std::uint64_t>(v)));
    if (rng.bernoulli(0.5)) list.push_back({parent, v});
    else list.push_back({v, parent});
  }
  while (static_cast<Index>(list.size()) < arcs) {
    const auto tail = static_cast<Index>(rng.below(static_cast<std::uint64_t>(nodes)));
    const auto head = static_cast<Index>(rng.below(static_cast<std::uint64_t>(nodes)));
    if (tail != head) list.push_back({tail, head});
  }
  Rng rhs_rng(seed, Rng::rhs);
  Vector demands(nodes);
  for (Index i = 0; i < nodes; ++i) demands[i] = static_cast<double>(rhs_rng.below(7)) - 3.0;
  std::optional<Vector> caps;
  if (capacitated) {
    Rng cap_rng(seed, Rng::coefficients);
    Vector u(arcs);
    for (Index j = 0; j < arcs; ++j) u[j] = 1.0 + static_cast<double>(cap_rng.below(4));
    caps = std::move(u);
  }
  return incidence_instance(list, demands, std::move(caps));
}

namespace {

struct Variant {
  UpdateKind kind;
  MappingKind mapping;
};

std::vector<Variant> variants_for(const Instance& inst) {
  std::vector<Variant> out;
  for (MappingKind mapping : {MappingKind::oblivious, MappingKind::local_norm}) {
    out.push_back({UpdateKind::projected_gradient, mapping});
    out.push_back({UpdateKind::coordinate, mapping});
    if (inst.all_bounds_finite()) out.push_back({UpdateKind::frank_wolfe, mapping});
  }
  return out;
}

Vector random_box_point(const Instance& inst, double infinite_scale, Rng& rng) {
  Vector x(inst.cols());
  for (Index i = 0; i < x.size(); ++i) {
    const double hi = inst.has_finite_bound(i) ? inst.u()[i] : infinite_scale;
    x[i] = rng.uniform(0.0, hi);
  }
  return x;
}

struct Suite {
  CheckAccumulator oracle{"oracle_equivalence", 1e-7};
  CheckAccumulator optimality{"final_optimality", 1e-8};
  CheckAccumulator minor_per_major{"minor_cycles_per_major_over_n", 1.0};
  CheckAccumulator repeats{"partition_repeats", 0.0};
  CheckAccumulator major_bound{"major_cycles_over_3_pow_n", 1.0};
  CheckAccumulator monotone{"monotonicity", 1e-8};
  CheckAccumulator pythagorean{"pythagorean_full_step", 1e-8};
  CheckAccumulator pg_drop{"pg_drop_identity", 1e-8};
  CheckAccumulator update_move{"update_move_identity", 1e-8};
  CheckAccumulator conforming{"conforming_update", 1e-12};
  CheckAccumulator segment{"update_segment_optimality", 0.0};
  CheckAccumulator stable_gradient{"stable_free_gradient", 1e-8};
  CheckAccumulator zeroing{"zeroing_identity", 1e-8};
  CheckAccumulator contraction_pg{"contraction_pg", 1e-10};
  CheckAccumulator contraction_coord{"contraction_coordinate", 1e-10};
  CheckAccumulator direction_pg{"direction_bound_pg", 1.0 + 1e-8};
  CheckAccumulator direction_coord{"direction_bound_coordinate", 1.0 + 1e-8};
  CheckAccumulator independence{"independence_coordinate", 0.0};
  CheckAccumulator proximity_linf{"proximity_linf_excess", 0.0};
  CheckAccumulator proximity_l2{"proximity_l2_excess", 0.0};
  CheckAccumulator network_kappa{"network_kappa_is_one", 1e-12};
  CheckAccumulator errors{"solver_errors", 0.0};

  std::vector<CheckResult> results() const {
    return {oracle.result(),          optimality.result(),      minor_per_major.result(),
            repeats.result(),         major_bound.result(),     monotone.result(),
            pythagorean.result(),     pg_drop.result(),         update_move.result(),
            conforming.result(),      segment.result(),         stable_gradient.result(),
            zeroing.result(),         contraction_pg.result(),  contraction_coord.result(),
            direction_pg.result(),    direction_coord.result(), independence.result(),
            proximity_linf.result(),  proximity_l2.result(),    network_kappa.result(),
            errors.result()};
  }
};

void audit_instance(const Instance& inst, std::uint64_t seed, int proximity_points, Suite& s) {
  const OptimumCertificate cert = brute_force_optimum(inst);
  const CircuitCatalog catalog = enumerate_circuits(inst.a());
  const double n = static_cast<double>(inst.cols());
  const double scale = 1.0 + inst.b().squaredNorm();

  for (const Variant& v : variants_for(inst)) {
    SolverConfig cfg;
    cfg.rule.kind = v.kind;
    cfg.mapping.kind = v.mapping;
    SolveAudit audit;
    AuditOptions aopts;
    aopts.check_independence = v.kind == UpdateKind::coordinate && inst.is_nnls();
    SolveReport rep;
    try {
      rep = audited_solve(inst, cfg, audit, aopts);
    } catch (const Error&) {
      s.errors.observe(1.0);
      continue;
    }
    s.errors.observe(rep.status == SolveStatus::optimal ? 0.0 : 1.0);

    s.oracle.observe(relative_objective_error(rep.objective, cert.p_star));
    const Iterate fin = make_iterate(inst, rep.x_final);
    s.optimality.observe(check_optimality(inst, fin, 0.0).violation);
    s.minor_per_major.observe(static_cast<double>(audit.max_minor_per_major) / n);
    s.repeats.observe(static_cast<double>(audit.partition_repeats));
    s.major_bound.observe(static_cast<double>(rep.major_cycles) / std::pow(3.0, n));
    s.monotone.observe(audit.max_increase);
    s.pythagorean.observe(audit.max_pythagorean);
    if (audit.pg_drop_checked > 0) s.pg_drop.observe(audit.max_pg_drop_rel);
    s.update_move.observe(audit.max_update_move);
    s.conforming.observe(audit.max_sign_product);
    s.segment.observe(static_cast<double>(audit.u2_violations));
    s.stable_gradient.observe(audit.max_stable_free_gradient);
    s.zeroing.observe(zeroing_identity_error(inst, rep.x_final, fin.free_indices()) / scale);
    if (aopts.check_independence) s.independence.observe(static_cast<double>(audit.rank_deficient_stable));

    if (inst.is_nnls() && v.kind != UpdateKind::frank_wolfe) {
      const ContractionReport c = verify_contraction(inst, rep, v.kind, cert, catalog);
      if (v.kind == UpdateKind::coordinate) {
        s.contraction_coord.observe(c.contraction.measured);
        s.direction_coord.observe(c.z_bound.measured);
      } else {
        s.contraction_pg.observe(c.contraction.measured);
        s.direction_pg.observe(c.z_bound.measured);
      }
    }
  }

  const OptimalFace face(inst, cert);
  Rng rng(seed, Rng::coefficients);
  const double reach = 2.0 * std::max(1.0, cert.x_star.lpNorm<Eigen::Infinity>());
  for (int k = 0; k < proximity_points; ++k) {
    const ProximityReport p = verify_proximity(inst, random_box_point(inst, reach, rng), face, catalog);
    s.proximity_linf.observe(p.linf.measured - p.linf.bound);
    s.proximity_l2.observe(p.l2.measured - p.l2.bound);
  }
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  validate(opts);
  Suite s;
  for (int i = 0; i < opts.instances; ++i) {
    const bool capacitated = i % 2 == 1;
    const std::optional<double> chi = (i / 2) % 2 == 1 ? std::optional<double>(0.5) : std::nullopt;
    const std::uint64_t seed = derive_seed(opts.seed, 0, static_cast<std::uint64_t>(i));
    audit_instance(random_small_instance(opts.m, opts.n, capacitated, chi, seed), seed, 20, s);
  }
  // Network instances sized to the same oracle caps.
  const Index nodes = std::max<Index>(2, std::min<Index>(opts.m + 1, kCircuitMaxColumns / 3));
  const Index arcs = std::min<Index>({std::max<Index>(nodes - 1, opts.n), kBruteForceMaxCols,
                                      kCircuitMaxColumns - nodes});
  const int networks = std::max(1, opts.instances / 3);
  for (int i = 0; i < networks; ++i) {
    const std::uint64_t seed = derive_seed(opts.seed, 1, static_cast<std::uint64_t>(i));
    const Instance inst = random_network_instance(nodes, arcs, i % 2 == 1, seed);
    s.network_kappa.observe(std::abs(enumerate_circuits(inst.a()).kappa - 1.0));
    audit_instance(inst, seed, 20, s);
  }
  return s.results();
}

std::string format_check(const CheckResult& check) {
  char buf[64];
  std::string line = check.pass ? "PASS " : "FAIL ";
  line += check.name;
  std::snprintf(buf, sizeof buf, " measured=%.6g", check.measured);
  line += buf;
  std::snprintf(buf, sizeof buf, " bound=%.6g", check.bound);
  line += buf;
  return line;
}

}  // namespace mnp
