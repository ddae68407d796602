#include "aht/flowmap.hpp"

#include <algorithm>
#include <cmath>

#include "aht/operators.hpp"

namespace aht {

namespace {

Vec2 eval_padded(const VectorField& u, Vec2 x) {
  static const EvalOptions kOpt{true};
  return eval_at(u, x, kOpt);
}

struct ClampResult {
  Vec2 x;
  bool clamped = false;
};

ClampResult clamp_to_domain(const GridPtr& g, Vec2 x) {
  if (g->kind() == DomainKind::Torus) return {x, false};
  const Domain& d = g->domain();
  const double r = x.norm();
  const double r_hi = d.kind == DomainKind::Disk ? d.radius : d.r_outer;
  const double slack = 0.5 * g->h1();
  require(r <= r_hi + slack, ErrorCode::LeftDomain, "trajectory left the domain outward");
  if (r > r_hi) return {x * (r_hi / r), true};
  if (d.kind == DomainKind::Annulus) {
    require(r >= d.r_inner - slack, ErrorCode::LeftDomain, "trajectory left the domain inward");
    if (r < d.r_inner) return {x * (d.r_inner / r), true};
  }
  return {x, false};
}

}  // namespace

SnapshotSeries::SnapshotSeries(std::vector<double> times, std::vector<VectorField> velocities)
    : t_(std::move(times)), u_(std::move(velocities)) {
  require(!t_.empty() && t_.size() == u_.size(), ErrorCode::InvalidArgument,
          "snapshot times and fields must match and be non-empty");
  for (size_t i = 0; i + 1 < t_.size(); ++i)
    require(t_[i] < t_[i + 1], ErrorCode::InvalidArgument, "snapshot times must increase");
  for (const auto& u : u_) check_same_grid(u.grid(), u_.front().grid(), "SnapshotSeries");
}

SnapshotSeries SnapshotSeries::from_run(const RunResult& run) {
  std::vector<double> t;
  std::vector<VectorField> u;
  for (const auto& s : run.snapshots) {
    t.push_back(s.t);
    u.push_back(s.u);
  }
  return SnapshotSeries(std::move(t), std::move(u));
}

double SnapshotSeries::max_spacing() const {
  double d = 0;
  for (size_t i = 0; i + 1 < t_.size(); ++i) d = std::max(d, t_[i + 1] - t_[i]);
  return d;
}

double SnapshotSeries::max_speed() const {
  double m = 0;
  for (const auto& u : u_) m = std::max(m, u.sup_abs());
  return m;
}

Vec2 SnapshotSeries::velocity(double t, Vec2 x) const {
  const int n = count();
  if (n == 1) return eval_padded(u_[0], x);
  require(t >= t_.front() - 1e-12 && t <= t_.back() + 1e-12, ErrorCode::InvalidArgument,
          "time outside the snapshot window");
  // bracket index i with t in [t_i, t_(i+1)], then a window of up to 4 points
  int i = static_cast<int>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  const int width = std::min(4, n);
  const int lo = std::clamp(i - 1, 0, n - width);
  Vec2 out{0, 0};
  for (int a = lo; a < lo + width; ++a) {
    double w = 1.0;
    for (int b = lo; b < lo + width; ++b)
      if (b != a) w *= (t - t_[b]) / (t_[a] - t_[b]);
    out = out + w * eval_padded(u_[a], x);
  }
  return out;
}

Trajectory integrate_trajectory(const SnapshotSeries& s, Vec2 x0, double T, double dt_cap) {
  require(T >= 0, ErrorCode::InvalidArgument, "integrate_trajectory needs T >= 0");
  require(s.t_min() <= 0 && T <= s.t_max() + 1e-12, ErrorCode::InvalidArgument,
          "trajectory window not covered by snapshots");
  const auto& g = s.grid();
  require(g->domain().contains(x0), ErrorCode::LeftDomain, "seed outside the domain");

  Trajectory tr;
  tr.x0 = x0;
  tr.t.push_back(0);
  tr.x.push_back(x0);
  if (T == 0) return tr;

  // a positive dt_cap pins the step outright (the knob convergence studies turn); the default
  // resolves the interpolant to ~1e-3 arc length per step
  double dt = s.count() > 1 ? s.max_spacing() : T;
  const double vmax = s.max_speed();
  if (dt_cap > 0)
    dt = dt_cap;
  else if (vmax > 0)
    dt = std::min(dt, 1e-3 / vmax);
  const int nsteps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-12)));
  dt = T / nsteps;

  Vec2 x = x0;
  for (int i = 0; i < nsteps; ++i) {
    const double t = i * dt;
    const Vec2 k1 = s.velocity(t, x);
    auto c1 = clamp_to_domain(g, x + 0.5 * dt * k1);
    const Vec2 k2 = s.velocity(t + 0.5 * dt, c1.x);
    auto c2 = clamp_to_domain(g, x + 0.5 * dt * k2);
    const Vec2 k3 = s.velocity(t + 0.5 * dt, c2.x);
    auto c3 = clamp_to_domain(g, x + dt * k3);
    const Vec2 k4 = s.velocity(t + dt, c3.x);
    auto cn = clamp_to_domain(g, x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    x = cn.x;
    tr.clamp_events += (c1.clamped ? 1 : 0) + (c2.clamped ? 1 : 0) + (c3.clamped ? 1 : 0) +
                       (cn.clamped ? 1 : 0);
    tr.t.push_back((i + 1) * dt);
    tr.x.push_back(x);
  }
  tr.t.back() = T;
  return tr;
}

Vec2 taylor_flow(const KatoDerivatives& kd, Vec2 x0, double t, int K) {
  require(K >= 0, ErrorCode::InvalidArgument, "truncation order must be >= 0");
  require(K + 1 <= static_cast<int>(kd.Du.size()), ErrorCode::InsufficientOrder,
          "ladder holds " + std::to_string(kd.Du.size()) + " derivatives, need " +
              std::to_string(K + 1));
  static const EvalOptions kOpt{true};
  Vec2 out = x0;
  double tk = 1.0;  // t^k / k!
  for (int k = 1; k <= K + 1; ++k) {
    tk *= t / k;
    out = out + tk * eval_at(kd.Du[static_cast<size_t>(k) - 1], x0, kOpt);
  }
  return out;
}

RadiusEstimate radius_estimate(const KatoDerivatives& kd, double L_star,
                               const DomainConstants& consts) {
  require(kd.order() >= 4, ErrorCode::InsufficientOrder,
          "radius fit needs the ladder through k = 4");
  RadiusEstimate est;
  est.bound = taylor_radius_bound(L_star, consts, std::max(kd.y_norm, 1e-300));

  // least squares of log(|D^k u|/k!) against k, excluding the k <= 1 transient and underflows
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& lvl : kd.levels) {
    if (lvl.k < 2 || lvl.norm < 1e-13) continue;
    const double xk = lvl.k;
    const double yk = std::log(lvl.norm) - std::lgamma(xk + 1.0);
    sx += xk;
    sy += yk;
    sxx += xk * xk;
    sxy += xk * yk;
    ++n;
  }
  est.points_used = n;
  if (n < 2) {
    est.empirical = std::numeric_limits<double>::infinity();
    return est;
  }
  const double denom = n * sxx - sx * sx;
  est.slope = (n * sxy - sx * sy) / denom;
  est.intercept = (sy - est.slope * sx) / n;
  est.empirical = std::exp(-est.slope);
  return est;
}

}  // namespace aht
