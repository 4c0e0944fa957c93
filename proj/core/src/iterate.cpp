#include "mnp/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mnp/error.hpp"

namespace mnp {

double default_opt_tol(const Instance& inst) { return 1e-9 * (1.0 + inst.b().norm()); }

std::vector<Index> Iterate::indices(BoundState s) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == s) out.push_back(static_cast<Index>(i));
  return out;
}

PartitionSizes Iterate::sizes() const {
  PartitionSizes sz;
  for (BoundState s : states_) {
    switch (s) {
      case BoundState::lower: ++sz.lower; break;
      case BoundState::upper: ++sz.upper; break;
      case BoundState::free: ++sz.free; break;
    }
  }
  return sz;
}

Iterate make_iterate(const Instance& inst, Vector x_raw, double snap_tol) {
  if (x_raw.size() != inst.cols()) throw DimensionError("make_iterate: x length must equal column count");
  Iterate it;
  it.states_.resize(static_cast<std::size_t>(x_raw.size()));
  for (Index i = 0; i < x_raw.size(); ++i) {
    double& xi = x_raw[i];
    const double ui = inst.u()[i];
    const bool finite_u = std::isfinite(ui);
    const double tol = snap_tol * (finite_u ? std::max(1.0, ui) : 1.0);
    if (!std::isfinite(xi)) {
      throw ContractError("make_iterate: coordinate " + std::to_string(i) + " is not finite");
    }
    if (xi < -tol || (finite_u && xi > ui + tol)) {
      throw ContractError("make_iterate: coordinate " + std::to_string(i) +
                          " violates its bounds beyond the snapping tolerance");
    }
    auto& state = it.states_[static_cast<std::size_t>(i)];
    if (xi <= tol) {
      xi = 0.0;
      state = BoundState::lower;
    } else if (finite_u && xi >= ui - tol) {
      xi = ui;
      state = BoundState::upper;
    } else {
      state = BoundState::free;
    }
  }
  it.residual_ = inst.a() * x_raw - inst.b();
  it.objective_ = 0.5 * it.residual_.squaredNorm();
  it.x_ = std::move(x_raw);
  return it;
}

Vector gradient(const Instance& inst, const Iterate& it) {
  return inst.a().transpose() * it.residual();
}

OptimalityCheck check_optimality(const Iterate& it, const Vector& g, double tol) {
  OptimalityCheck out;
  for (Index i = 0; i < g.size(); ++i) {
    double violation = 0.0;
    ViolationKind kind = ViolationKind::none;
    switch (it.state(i)) {
      case BoundState::lower:
        if (g[i] < -tol) { violation = -g[i]; kind = ViolationKind::lower_negative_gradient; }
        break;
      case BoundState::upper:
        if (g[i] > tol) { violation = g[i]; kind = ViolationKind::upper_positive_gradient; }
        break;
      case BoundState::free:
        if (std::abs(g[i]) > tol) { violation = std::abs(g[i]); kind = ViolationKind::free_nonzero_gradient; }
        break;
    }
    if (kind != ViolationKind::none && violation > out.violation) {
      out.optimal = false;
      out.index = i;
      out.kind = kind;
      out.violation = violation;
    }
  }
  return out;
}

OptimalityCheck check_optimality(const Instance& inst, const Iterate& it, double tol) {
  return check_optimality(it, gradient(inst, it), tol);
}

}  // namespace mnp
