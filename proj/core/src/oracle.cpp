#include "mnp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "mnp/error.hpp"
#include "mnp/iterate.hpp"

namespace mnp {

namespace {

Matrix gather_columns(const Matrix& a, const std::vector<Index>& cols) {
  Matrix out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = a.col(cols[k]);
  return out;
}

// Visits every assignment of BoundState to n coordinates, skipping `upper`
// on coordinates with infinite bound. Digits: 0 lower, 1 free, 2 upper.
template <typename Visit>
void for_each_partition(const Instance& inst, Visit&& visit) {
  const Index n = inst.cols();
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  std::vector<int> radix(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) radix[static_cast<std::size_t>(i)] = inst.has_finite_bound(i) ? 3 : 2;
  std::vector<Index> lower, upper, free;
  while (true) {
    lower.clear();
    upper.clear();
    free.clear();
    for (Index i = 0; i < n; ++i) {
      switch (digit[static_cast<std::size_t>(i)]) {
        case 0: lower.push_back(i); break;
        case 1: free.push_back(i); break;
        default: upper.push_back(i); break;
      }
    }
    visit(lower, upper, free);
    Index k = 0;
    while (k < n) {
      auto& d = digit[static_cast<std::size_t>(k)];
      if (++d < radix[static_cast<std::size_t>(k)]) break;
      d = 0;
      ++k;
    }
    if (k == n) return;
  }
}

Vector fixed_point(const Instance& inst, const std::vector<Index>& upper) {
  Vector x = Vector::Zero(inst.cols());
  for (Index i : upper) x[i] = inst.u()[i];
  return x;
}

double bound_tol(const Instance& inst, Index i, double tol) {
  return tol * (inst.has_finite_bound(i) ? std::max(1.0, inst.u()[i]) : 1.0);
}

}  // namespace

// ---------------------------------------------------------------- optimum

OptimumCertificate brute_force_optimum(const Instance& inst) {
  if (inst.cols() > kBruteForceMaxCols) {
    throw CapExceeded("brute_force_optimum: n = " + std::to_string(inst.cols()) +
                      " exceeds the enumeration cap n <= " + std::to_string(kBruteForceMaxCols));
  }
  const double feas_tol = 1e-9;
  const double kkt_tol = 1e-9 * (1.0 + inst.a().norm() * inst.b().norm());

  bool found = false;
  OptimumCertificate best;
  std::vector<Vector> optimal_images;

  for_each_partition(inst, [&](const std::vector<Index>& lower, const std::vector<Index>& upper,
                               const std::vector<Index>& free) {
    Vector x = fixed_point(inst, upper);
    if (!free.empty()) {
      const Vector rhs = inst.b() - inst.a() * x;
      const Vector w = min_norm_least_squares(gather_columns(inst.a(), free), rhs);
      for (std::size_t k = 0; k < free.size(); ++k) {
        const Index i = free[k];
        const double v = w[static_cast<Index>(k)];
        const double t = bound_tol(inst, i, feas_tol);
        if (v < -t || (inst.has_finite_bound(i) && v > inst.u()[i] + t)) return;
        x[i] = std::clamp(v, 0.0, inst.u()[i]);
      }
    }
    const Vector g = inst.a().transpose() * (inst.a() * x - inst.b());
    for (Index i : lower)
      if (g[i] < -kkt_tol) return;
    for (Index i : upper)
      if (g[i] > kkt_tol) return;
    for (Index i : free)
      if (std::abs(g[i]) > kkt_tol) return;

    const Vector image = inst.a() * x;
    const double value = 0.5 * (image - inst.b()).squaredNorm();
    optimal_images.push_back(image);
    if (!found || value < best.p_star) {
      found = true;
      best.p_star = value;
      best.b_star = image;
      best.x_star = x;
    }
  });

  if (!found) throw NumericalFault("brute_force_optimum: no partition produced a KKT point");
  const double agree_tol = 1e-8 * (1.0 + inst.b().norm());
  for (const Vector& image : optimal_images) {
    if ((image - best.b_star).norm() > agree_tol) {
      throw NumericalFault("brute_force_optimum: optimal candidates disagree on A x*");
    }
  }
  const Iterate it = make_iterate(inst, best.x_star, 0.0);
  best.kkt_residual = check_optimality(inst, it, 0.0).violation;
  return best;
}

// --------------------------------------------------------------- circuits

CircuitCatalog enumerate_circuits(const Matrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Index total = n + m;
  if (total > kCircuitMaxColumns) {
    throw CapExceeded("enumerate_circuits: n + m = " + std::to_string(total) +
                      " exceeds the cap n + m <= " + std::to_string(kCircuitMaxColumns));
  }
  Matrix extended(m, total);
  extended << a, -Matrix::Identity(m, m);

  CircuitCatalog catalog;
  catalog.n = n;
  catalog.m = m;
  const Index max_support = numerical_rank(extended) + 1;
  const std::uint32_t limit = 1u << total;
  std::vector<Index> support;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    if (std::popcount(mask) > max_support) continue;
    support.clear();
    for (Index k = 0; k < total; ++k)
      if (mask & (1u << k)) support.push_back(k);

    const RankRevealingLS ls(gather_columns(extended, support));
    if (ls.cols() - ls.rank() != 1) continue;
    Vector kernel = ls.null_space().col(0);
    const double peak = kernel.cwiseAbs().maxCoeff();
    if (kernel.cwiseAbs().minCoeff() <= 1e-9 * peak) continue;  // not full support

    Index arg = 0;
    kernel.cwiseAbs().maxCoeff(&arg);
    kernel /= kernel[arg];
    Vector g = Vector::Zero(total);
    for (std::size_t k = 0; k < support.size(); ++k) g[support[k]] = kernel[static_cast<Index>(k)];
    const double ratio = 1.0 / kernel.cwiseAbs().minCoeff();
    catalog.kappa = std::max(catalog.kappa, ratio);
    catalog.elementary_vectors.push_back(std::move(g));
  }
  return catalog;
}

std::vector<Vector> conformal_decomposition(const Matrix& a, const Vector& v,
                                            const CircuitCatalog& catalog) {
  const Index n = a.cols();
  const Index m = a.rows();
  if (catalog.n != n || catalog.m != m) throw DimensionError("conformal_decomposition: catalog does not match A");
  if (v.size() != n) throw DimensionError("conformal_decomposition: v length must equal column count");

  Vector remainder(n + m);
  remainder << v, a * v;
  const double zero_tol = 1e-12 * (1.0 + remainder.lpNorm<Eigen::Infinity>());
  auto clean = [&](Vector& r) {
    for (Index k = 0; k < r.size(); ++k)
      if (std::abs(r[k]) <= zero_tol) r[k] = 0.0;
  };
  clean(remainder);

  std::vector<Vector> pieces;
  while (!remainder.isZero(0.0)) {
    bool progressed = false;
    for (const Vector& e : catalog.elementary_vectors) {
      for (double sign : {1.0, -1.0}) {
        double scale = std::numeric_limits<double>::infinity();
        Index blocking = -1;
        bool conforms = true;
        for (Index k = 0; k < e.size() && conforms; ++k) {
          if (e[k] == 0.0) continue;
          const double ek = sign * e[k];
          if (remainder[k] * ek <= 0.0) {
            conforms = false;
          } else if (remainder[k] / ek < scale) {
            scale = remainder[k] / ek;
            blocking = k;
          }
        }
        if (!conforms) continue;
        const Vector piece = (sign * scale) * e;
        for (Index k = 0; k < e.size(); ++k) {
          if (e[k] == 0.0) continue;
          remainder[k] -= piece[k];
          if (remainder[k] * e[k] * sign < 0.0) remainder[k] = 0.0;  // ties with the blocking ratio
        }
        remainder[blocking] = 0.0;
        clean(remainder);
        pieces.push_back(piece);
        progressed = true;
        break;
      }
      if (progressed) break;
    }
    if (!progressed) {
      throw NumericalFault("conformal_decomposition: no conforming elementary vector for the remainder");
    }
  }

  // Caratheodory reduction: while more than n pieces (dim ker(A | -I) = n),
  // shift weight along a linear dependency until a piece vanishes. Weights
  // stay nonnegative, so conformity is preserved.
  std::vector<double> weight(pieces.size(), 1.0);
  while (static_cast<Index>(pieces.size()) > n) {
    Matrix stacked(n + m, static_cast<Index>(pieces.size()));
    for (std::size_t k = 0; k < pieces.size(); ++k) stacked.col(static_cast<Index>(k)) = weight[k] * pieces[k];
    const RankRevealingLS ls(stacked);
    if (ls.cols() == ls.rank()) break;
    Vector mu = ls.null_space().col(0);
    if (mu.maxCoeff() <= 0.0) mu = -mu;
    double t = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < mu.size(); ++k)
      if (mu[k] > 0.0) t = std::min(t, 1.0 / mu[k]);
    std::vector<Vector> kept;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const double c = 1.0 - t * mu[static_cast<Index>(k)];
      if (c > 1e-12) kept.push_back((c * weight[k]) * pieces[k]);
    }
    pieces = std::move(kept);
    weight.assign(pieces.size(), 1.0);
  }

  std::vector<Vector> out;
  out.reserve(pieces.size());
  for (const Vector& p : pieces) out.push_back(p.head(n));
  return out;
}

// -------------------------------------------------------------- proximity

OptimalFace::OptimalFace(const Instance& inst, const OptimumCertificate& cert) : inst_(&inst) {
  if (inst.cols() > kBruteForceMaxCols) {
    throw CapExceeded("OptimalFace: n exceeds the enumeration cap n <= " + std::to_string(kBruteForceMaxCols));
  }
  const double consistency_tol = 1e-9 * (1.0 + cert.b_star.norm());
  for_each_partition(inst, [&](const std::vector<Index>&, const std::vector<Index>& upper,
                               const std::vector<Index>& free) {
    Piece piece;
    piece.free = free;
    piece.fixed = fixed_point(inst, upper);
    piece.target = cert.b_star - inst.a() * piece.fixed;
    piece.columns = gather_columns(inst.a(), free);
    if (free.empty()) {
      if (piece.target.norm() > consistency_tol) return;
      pieces_.push_back(std::move(piece));
      return;
    }
    const RankRevealingLS ls(piece.columns);
    const Vector particular = ls.solve_min_norm(piece.target);
    if ((piece.columns * particular - piece.target).norm() > consistency_tol) return;
    piece.pinv.resize(piece.columns.cols(), piece.columns.rows());
    for (Index r = 0; r < piece.columns.rows(); ++r) {
      piece.pinv.col(r) = ls.solve_min_norm(Vector::Unit(piece.columns.rows(), r));
    }
    pieces_.push_back(std::move(piece));
  });
}

Vector OptimalFace::nearest(const Vector& x) const {
  const Instance& inst = *inst_;
  double best_dist = std::numeric_limits<double>::infinity();
  Vector best;
  Vector y;
  for (const Piece& piece : pieces_) {
    y = piece.fixed;
    bool feasible = true;
    if (!piece.free.empty()) {
      Vector x_free(static_cast<Index>(piece.free.size()));
      for (std::size_t k = 0; k < piece.free.size(); ++k) x_free[static_cast<Index>(k)] = x[piece.free[k]];
      const Vector y_free = x_free + piece.pinv * (piece.target - piece.columns * x_free);
      for (std::size_t k = 0; k < piece.free.size() && feasible; ++k) {
        const Index i = piece.free[k];
        const double v = y_free[static_cast<Index>(k)];
        const double t = bound_tol(inst, i, 1e-9);
        if (v < -t || (inst.has_finite_bound(i) && v > inst.u()[i] + t)) feasible = false;
        y[i] = std::clamp(v, 0.0, inst.u()[i]);
      }
    }
    if (!feasible) continue;
    const double dist = (y - x).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = y;
    }
  }
  if (best.size() == 0) throw NumericalFault("OptimalFace: no feasible piece of the optimal face");
  return best;
}

ProximityReport verify_proximity(const Instance& inst, const Vector& x, const OptimalFace& face,
                                 const CircuitCatalog& catalog) {
  ProximityReport rep;
  rep.nearest_optimum = face.nearest(x);
  const Vector diff = x - rep.nearest_optimum;
  const Vector image_gap = inst.a() * x - inst.a() * rep.nearest_optimum;
  const double kappa = catalog.kappa;
  const auto m = static_cast<double>(inst.rows());

  rep.linf.name = "proximity_linf";
  rep.linf.measured = diff.lpNorm<Eigen::Infinity>();
  rep.linf.bound = kappa * image_gap.lpNorm<1>() + 1e-8;
  rep.linf.pass = rep.linf.measured <= rep.linf.bound;

  rep.l2.name = "proximity_l2";
  rep.l2.measured = diff.norm();
  rep.l2.bound = m * kappa * image_gap.norm() + 1e-8;
  rep.l2.pass = rep.l2.measured <= rep.l2.bound;
  return rep;
}

ProximityReport verify_proximity(const Instance& inst, const Vector& x,
                                 const OptimumCertificate& cert, const CircuitCatalog& catalog) {
  return verify_proximity(inst, x, OptimalFace(inst, cert), catalog);
}

// ------------------------------------------------------------ contraction

ContractionReport verify_contraction(const Instance& inst, const SolveReport& report,
                                     UpdateKind rule, const OptimumCertificate& cert,
                                     const CircuitCatalog& catalog) {
  if (!inst.is_nnls()) throw ContractError("verify_contraction: NNLS instances only");
  if (rule == UpdateKind::frank_wolfe) throw ContractError("verify_contraction: PG or coordinate traces only");
  if (inst.cols() > kBruteForceMaxCols || inst.cols() + inst.rows() > kCircuitMaxColumns) {
    throw CapExceeded("verify_contraction: instance exceeds the oracle caps");
  }

  const auto m = static_cast<double>(inst.rows());
  const auto n = static_cast<double>(inst.cols());
  const double kappa = catalog.kappa;
  const double norm_a = spectral_norm(inst.a());
  const double denom = 2.0 * m * m * kappa * kappa * norm_a * norm_a;
  const double rho = rule == UpdateKind::coordinate ? 1.0 - 1.0 / (n * denom) : 1.0 - 1.0 / denom;
  const double dir_scale = rule == UpdateKind::coordinate ? std::sqrt(n) : 1.0;

  ContractionReport rep;
  rep.contraction.name = rule == UpdateKind::coordinate ? "contraction_coordinate" : "contraction_pg";
  rep.contraction.bound = 1e-10;
  rep.contraction.measured = -std::numeric_limits<double>::infinity();
  rep.z_bound.name = rule == UpdateKind::coordinate ? "direction_bound_coordinate" : "direction_bound_pg";
  rep.z_bound.bound = 1.0 + 1e-8;
  rep.z_bound.measured = 0.0;

  double before = report.initial_objective;
  for (const TraceEvent& ev : report.trace) {
    if (ev.kind == CycleKind::major_update && ev.moved) {
      const double gap_x = before - cert.p_star;
      const double gap_y = ev.objective_after - cert.p_star;
      rep.contraction.measured = std::max(rep.contraction.measured, gap_y - rho * gap_x);
      // Below ~1e-12 the gap is dominated by cancellation error.
      if (gap_x > 1e-12) {
        const double lower = std::sqrt(gap_x) / (std::sqrt(2.0) * m * kappa * dir_scale);
        rep.z_bound.measured = std::max(rep.z_bound.measured, lower / ev.direction_norm);
      }
      ++rep.steps_checked;
    }
    before = ev.objective_after;
  }
  if (rep.steps_checked == 0) rep.contraction.measured = 0.0;
  rep.contraction.pass = rep.contraction.measured <= rep.contraction.bound;
  rep.z_bound.pass = rep.z_bound.measured <= rep.z_bound.bound;
  return rep;
}

double zeroing_identity_error(const Instance& inst, const Vector& x, const std::vector<Index>& zeroed) {
  Vector xd = x;
  for (Index i : zeroed) xd[i] = 0.0;
  const Vector ax = inst.a() * x;
  const Vector axd = inst.a() * xd;
  const double lhs = (axd - inst.b()).squaredNorm();
  const double rhs = (ax - inst.b()).squaredNorm() + (axd - ax).squaredNorm();
  return std::abs(lhs - rhs);
}

}  // namespace mnp
