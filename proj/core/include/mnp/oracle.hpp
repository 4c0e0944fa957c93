#pragma once

#include <string>
#include <vector>

#include "mnp/instance.hpp"
#include "mnp/solver.hpp"

namespace mnp {

// Exhaustive-enumeration ground truth for small instances.

inline constexpr Index kBruteForceMaxCols = 12;
inline constexpr Index kCircuitMaxColumns = 16;  // n + m

struct OptimumCertificate {
  double p_star = 0.0;  // 1/2 ||b - b*||^2
  Vector b_star;        // A x*
  Vector x_star;
  double kkt_residual = 0.0;  // worst optimality violation of x_star
};

/// Enumerates every partition (I0, I1) (I1 only over finite bounds), solves
/// the least-squares problem on the free columns, and keeps feasible points
/// passing the optimality check. Throws CapExceeded above kBruteForceMaxCols
/// and NumericalFault if optimal candidates disagree on b*.
OptimumCertificate brute_force_optimum(const Instance& inst);

/// Support-minimal vectors of ker(A | -I_m), one per sign class, scaled so
/// the entry of largest magnitude is +1. Entries 0..n-1 are the h part,
/// n..n+m-1 the A h part.
struct CircuitCatalog {
  Index n = 0;
  Index m = 0;
  std::vector<Vector> elementary_vectors;
  double kappa = 1.0;
};

CircuitCatalog enumerate_circuits(const Matrix& a);

/// Conformal decomposition of (v, A v) into elementary vectors of
/// ker(A | -I_m); returns the N-parts h^k, at most n of them. Throws
/// NumericalFault when no conforming circuit exists for a nonzero remainder.
std::vector<Vector> conformal_decomposition(const Matrix& a, const Vector& v,
                                            const CircuitCatalog& catalog);

struct CheckResult {
  std::string name;
  bool pass = true;
  double measured = 0.0;
  double bound = 0.0;
};

/// Nearest point of the optimal set {y in box : A y = b*} to a given x, by
/// enumerating the affine pieces of the optimal face. Built once per
/// instance; queries are cheap.
class OptimalFace {
 public:
  OptimalFace(const Instance& inst, const OptimumCertificate& cert);
  Vector nearest(const Vector& x) const;

 private:
  struct Piece {
    std::vector<Index> free;
    Vector fixed;      // full-length point with bound values, zero on free
    Matrix pinv;       // pseudoinverse of A^J
    Matrix columns;    // A^J
    Vector target;     // b* minus the fixed contribution
  };
  const Instance* inst_;
  std::vector<Piece> pieces_;
};

struct ProximityReport {
  CheckResult linf;  // ||x - x*||_inf <= kappa ||A x - b*||_1
  CheckResult l2;    // ||x - x*||_2 <= m kappa ||A x - b*||_2
  Vector nearest_optimum;
};

ProximityReport verify_proximity(const Instance& inst, const Vector& x, const OptimalFace& face,
                                 const CircuitCatalog& catalog);
ProximityReport verify_proximity(const Instance& inst, const Vector& x,
                                 const OptimumCertificate& cert, const CircuitCatalog& catalog);

struct ContractionReport {
  CheckResult contraction;  // worst gap(y) - rho gap(x) over major updates
  CheckResult z_bound;      // worst ratio of the lower bound on the direction to its norm
  long steps_checked = 0;
};

/// Checks gap(y) <= rho gap(x) + 1e-10 for every moving major update of an
/// NNLS solver trace, rho = 1 - 1/(2 m^2 kappa^2 ||A||^2) for PG and
/// 1 - 1/(2 n m^2 kappa^2 ||A||^2) for coordinate updates, together with the
/// direction bound ||z|| >= sqrt(gap(x)) / (sqrt(2) m kappa) (for coordinate
/// runs z(j) >= that bound / sqrt(n)).
ContractionReport verify_contraction(const Instance& inst, const SolveReport& report,
                                     UpdateKind rule, const OptimumCertificate& cert,
                                     const CircuitCatalog& catalog);

/// ||A xd - b||^2 = ||A x - b||^2 + ||A xd - A x||^2 where xd zeroes the
/// coordinates `zeroed` (free coordinates of a stable x). Returns the
/// absolute discrepancy.
double zeroing_identity_error(const Instance& inst, const Vector& x, const std::vector<Index>& zeroed);

}  // namespace mnp
