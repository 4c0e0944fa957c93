#include "mnp/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <vector>

#include "mnp/error.hpp"
#include "mnp/updates.hpp"

namespace mnp {

std::string_view to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::pg: return "pg";
    case BaselineMethod::pfg: return "pfg";
    case BaselineMethod::fw: return "fw";
    case BaselineMethod::afw: return "afw";
  }
  return "unknown";
}

double default_baseline_eps(const Instance& inst) { return 1e-8 * (1.0 + inst.b().norm()); }

namespace {

using Clock = std::chrono::steady_clock;

Vector project(const Instance& inst, Vector v) {
  for (Index i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], 0.0, inst.u()[i]);
  return v;
}

double objective_at(const Instance& inst, const Vector& x) {
  return 0.5 * (inst.a() * x - inst.b()).squaredNorm();
}

// Exact minimizer of the objective on x + t d, t in [0, t_max].
double line_search(const Instance& inst, const Vector& residual, const Vector& d, double t_max) {
  const Vector ad = inst.a() * d;
  const double curvature = ad.squaredNorm();
  const double slope = residual.dot(ad);
  if (curvature == 0.0) return slope < 0.0 ? t_max : 0.0;
  return std::clamp(-slope / curvature, 0.0, t_max);
}

class BaselineRun {
 public:
  BaselineRun(const Instance& inst, const BaselineConfig& cfg)
      : inst_(inst), cfg_(cfg), start_(Clock::now()) {
    eps_ = cfg.eps > 0.0 ? cfg.eps : default_baseline_eps(inst);
    const double norm = spectral_norm(inst.a());
    step_ = norm > 0.0 ? 1.0 / (norm * norm) : 1.0;
  }

  SolveReport execute() {
    if ((cfg_.method == BaselineMethod::fw || cfg_.method == BaselineMethod::afw) &&
        !inst_.all_bounds_finite()) {
      throw ContractError("frank-wolfe requires finite bounds");
    }
    x_ = cfg_.start ? *cfg_.start : Vector::Zero(inst_.cols());
    if (x_.size() != inst_.cols()) throw DimensionError("run_baseline: start length must equal column count");
    x_ = project(inst_, x_);
    report_.initial_objective = objective_at(inst_, x_);
    switch (cfg_.method) {
      case BaselineMethod::pg: run_pg(); break;
      case BaselineMethod::pfg: run_pfg(); break;
      case BaselineMethod::fw: run_fw(); break;
      case BaselineMethod::afw: run_afw(); break;
    }
    report_.x_final = x_;
    report_.objective = objective_at(inst_, x_);
    report_.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return std::move(report_);
  }

 private:
  // Returns true when the loop must stop; sets the status.
  bool should_stop(const Vector& g) {
    if (stationarity(inst_, x_, g) <= eps_) {
      report_.status = SolveStatus::optimal;
      return true;
    }
    if (report_.major_cycles >= cfg_.max_iters) {
      report_.status = SolveStatus::iteration_cap;
      return true;
    }
    const std::chrono::duration<double> elapsed = Clock::now() - start_;
    if (elapsed.count() > cfg_.time_limit) {
      report_.status = SolveStatus::time_limit;
      return true;
    }
    return false;
  }

  void record(double objective, double direction_norm) {
    ++report_.major_cycles;
    if (!cfg_.record_trace) return;
    TraceEvent ev;
    ev.kind = CycleKind::major_update;
    ev.objective_after = objective;
    ev.direction_norm = direction_norm;
    report_.trace.push_back(ev);
  }

  void run_pg() {
    Vector r = inst_.a() * x_ - inst_.b();
    while (true) {
      const Vector g = inst_.a().transpose() * r;
      if (should_stop(g)) return;
      const Vector d = project(inst_, x_ - step_ * g) - x_;
      const double t = line_search(inst_, r, d, 1.0);
      x_ = project(inst_, x_ + t * d);
      r = inst_.a() * x_ - inst_.b();
      record(0.5 * r.squaredNorm(), d.norm());
    }
  }

  void run_pfg() {
    Vector previous = x_;
    double momentum = 1.0;
    Vector r = inst_.a() * x_ - inst_.b();
    double f = 0.5 * r.squaredNorm();
    while (true) {
      const Vector g = inst_.a().transpose() * r;
      if (should_stop(g)) return;
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      const Vector y = x_ + ((momentum - 1.0) / next_momentum) * (x_ - previous);
      const Vector gy = inst_.a().transpose() * (inst_.a() * y - inst_.b());
      Vector candidate = project(inst_, y - step_ * gy);
      Vector rc = inst_.a() * candidate - inst_.b();
      double fc = 0.5 * rc.squaredNorm();
      momentum = next_momentum;
      if (fc > f) {
        // Restart: drop momentum and take a plain projected step from x.
        momentum = 1.0;
        candidate = project(inst_, x_ - step_ * g);
        rc = inst_.a() * candidate - inst_.b();
        fc = 0.5 * rc.squaredNorm();
      }
      const double moved = (candidate - x_).norm();
      previous = std::move(x_);
      x_ = std::move(candidate);
      r = std::move(rc);
      f = fc;
      record(f, moved);
    }
  }

  void run_fw() {
    Vector r = inst_.a() * x_ - inst_.b();
    while (true) {
      const Vector g = inst_.a().transpose() * r;
      if (should_stop(g)) return;
      Vector vertex = x_;
      for (Index i = 0; i < g.size(); ++i) {
        if (g[i] > 0.0) vertex[i] = 0.0;
        else if (g[i] < 0.0) vertex[i] = inst_.u()[i];
      }
      const Vector d = vertex - x_;
      const double t = line_search(inst_, r, d, 1.0);
      x_ = t == 1.0 ? vertex : project(inst_, x_ + t * d);
      r = inst_.a() * x_ - inst_.b();
      record(0.5 * r.squaredNorm(), -g.dot(d));
    }
  }

  using VertexKey = std::vector<char>;  // 1 where the vertex sits at u(i)

  Vector vertex_point(const VertexKey& key) const {
    Vector v = Vector::Zero(inst_.cols());
    for (Index i = 0; i < v.size(); ++i)
      if (key[static_cast<std::size_t>(i)]) v[i] = inst_.u()[i];
    return v;
  }

  void run_afw() {
    VertexKey start_key(static_cast<std::size_t>(inst_.cols()), 0);
    for (Index i = 0; i < x_.size(); ++i) {
      if (x_[i] == inst_.u()[i]) start_key[static_cast<std::size_t>(i)] = 1;
      else if (x_[i] != 0.0) throw ContractError("away-step frank-wolfe: start must be a vertex of the box");
    }
    // Convex-combination weights over visited vertices.
    std::map<VertexKey, double> active{{start_key, 1.0}};
    Vector r = inst_.a() * x_ - inst_.b();
    while (true) {
      const Vector g = inst_.a().transpose() * r;
      if (should_stop(g)) return;

      VertexKey fw_key(static_cast<std::size_t>(inst_.cols()), 0);
      for (Index i = 0; i < g.size(); ++i)
        if (g[i] < 0.0) fw_key[static_cast<std::size_t>(i)] = 1;
      const Vector fw_dir = vertex_point(fw_key) - x_;

      auto away = active.begin();
      double away_value = -std::numeric_limits<double>::infinity();
      for (auto it = active.begin(); it != active.end(); ++it) {
        const double value = g.dot(vertex_point(it->first));
        if (value > away_value) {
          away_value = value;
          away = it;
        }
      }
      const Vector away_dir = x_ - vertex_point(away->first);

      const bool fw_step = -g.dot(fw_dir) >= -g.dot(away_dir);
      double t = 0.0;
      if (fw_step) {
        t = line_search(inst_, r, fw_dir, 1.0);
        for (auto& [key, weight] : active) weight *= (1.0 - t);
        active[fw_key] += t;
        if (t == 1.0) active = {{fw_key, 1.0}};
        x_ = x_ + t * fw_dir;
      } else {
        const double alpha = away->second;
        const double t_max = alpha / (1.0 - alpha);
        t = line_search(inst_, r, away_dir, t_max);
        for (auto& [key, weight] : active) weight *= (1.0 + t);
        away->second -= t;
        if (t == t_max) active.erase(away);
        x_ = x_ + t * away_dir;
      }
      std::erase_if(active, [](const auto& kv) { return kv.second <= 0.0; });
      x_ = project(inst_, x_);
      r = inst_.a() * x_ - inst_.b();
      record(0.5 * r.squaredNorm(), fw_step ? fw_dir.norm() : away_dir.norm());
    }
  }

  const Instance& inst_;
  const BaselineConfig& cfg_;
  Clock::time_point start_;
  double eps_ = 0.0;
  double step_ = 1.0;
  Vector x_;
  SolveReport report_;
};

}  // namespace

double stationarity(const Instance& inst, const Vector& x, const Vector& g) {
  return (x - project(inst, x - g)).lpNorm<Eigen::Infinity>();
}

SolveReport run_baseline(const Instance& inst, const BaselineConfig& cfg) {
  return BaselineRun(inst, cfg).execute();
}

}  // namespace mnp
