#include "aht/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "aht/fft.hpp"
#include "aht/operators.hpp"

namespace aht {

namespace {

void check_finite(const VectorField& y, const char* what) {
  require(y.finite(), ErrorCode::NonFiniteField, std::string(what) + ": field has NaN or Inf");
}

// d_t y = -(P y . grad) y; the projection is recomputed from the stage field every call
VectorField rhs(const VectorField& y) {
  const VectorField u = leray_project(y).u;
  return advect(u, jacobian(y)) * (-1.0);
}

void filter_scalar_torus(ScalarField& f) {
  const auto& sp = TorusSpectral::get(f.grid());
  std::vector<std::complex<double>> fh;
  sp.forward(f, fh);
  double kmax1 = 0, kmax2 = 0;
  for (int i = 0; i < sp.n1(); ++i) kmax1 = std::max(kmax1, std::abs(sp.k1(i)));
  for (int j = 0; j < sp.nc(); ++j) kmax2 = std::max(kmax2, std::abs(sp.k2(j)));
  for (int i = 0; i < sp.n1(); ++i) {
    const double r1 = std::abs(sp.k1(i)) / kmax1;
    const double s1 = std::exp(-36.0 * std::pow(r1, 36));
    for (int j = 0; j < sp.nc(); ++j) {
      const double r2 = std::abs(sp.k2(j)) / kmax2;
      fh[sp.cindex(i, j)] *= s1 * std::exp(-36.0 * std::pow(r2, 36));
    }
  }
  sp.backward(fh, f);
}

void filter_scalar_polar(ScalarField& f) {
  const auto& sp = AngularSpectral::get(f.grid());
  const int nm = sp.nm();
  const int m0 = (2 * (nm - 1)) / 3;  // taper the top third of angular modes
  std::vector<std::complex<double>> fh;
  sp.forward(f, fh);
  const int n1 = f.grid()->n1();
  for (int j = 0; j < n1; ++j)
    for (int m = m0 + 1; m < nm; ++m) {
      const double xi = static_cast<double>(m - m0) / (nm - 1 - m0);
      fh[j * nm + m] *= std::exp(-36.0 * xi * xi * xi * xi);
    }
  sp.backward(fh, f);
}

// returns the quadrature integral of |y_pre - y_post|^2
double apply_filter(VectorField& y) {
  ScalarField diff2(y.grid());
  for (int c = 0; c < 2; ++c) {
    ScalarField pre = y.comp(c);
    if (y.grid()->kind() == DomainKind::Torus)
      filter_scalar_torus(y.comp(c));
    else
      filter_scalar_polar(y.comp(c));
    for (int n = 0; n < pre.size(); ++n) {
      const double d = y.comp(c)[n] - pre[n];
      diff2[n] += d * d;
    }
  }
  return diff2.integral();
}

double squared_speed_integral(const VectorField& u) {
  ScalarField s(u.grid());
  for (int n = 0; n < s.size(); ++n) {
    const double a = u.comp(0)[n], b = u.comp(1)[n];
    s[n] = a * a + b * b;
  }
  return s.integral();
}

}  // namespace

AhtState make_state(VectorField y0) {
  check_finite(y0, "make_state");
  AhtState s;
  auto pr = leray_project(y0);
  s.y = std::move(y0);
  s.u = std::move(pr.u);
  s.p = std::move(pr.p);
  s.div_residual = pr.div_residual;
  s.bc_residual = pr.bc_residual;
  return s;
}

double max_cfl_dt(const AhtState& s, double cfl_safety) {
  require(cfl_safety > 0, ErrorCode::InvalidArgument, "CFL safety factor must be positive");
  const auto& g = s.u.grid();
  double rate = 0;
  if (g->kind() == DomainKind::Torus) {
    for (int a = 0; a < g->n1(); ++a)
      for (int b = 0; b < g->n2(); ++b) {
        const Vec2 u = s.u.at(a, b);
        rate = std::max(rate, std::abs(u.x) / g->h1() + std::abs(u.y) / g->h2());
      }
  } else {
    for (int j = 0; j < g->n1(); ++j) {
      const double r = g->radius(j);
      for (int i = 0; i < g->n2(); ++i) {
        const double th = g->theta(i);
        const Vec2 u = s.u.at(j, i);
        const double ur = u.x * std::cos(th) + u.y * std::sin(th);
        const double ut = -u.x * std::sin(th) + u.y * std::cos(th);
        rate = std::max(rate, std::abs(ur) / g->h1() + std::abs(ut) / (r * g->h2()));
      }
    }
  }
  if (rate == 0) return std::numeric_limits<double>::infinity();
  return cfl_safety / rate;
}

AhtState step(const AhtState& s, double dt, const StepOptions& opt) {
  require(std::isfinite(dt), ErrorCode::InvalidArgument, "dt must be finite");
  if (dt == 0) return s;
  const double dt_max = max_cfl_dt(s, opt.cfl_safety);
  require(std::abs(dt) <= dt_max * (1.0 + 1e-12), ErrorCode::CflViolation,
          "dt " + std::to_string(dt) + " exceeds the CFL limit " + std::to_string(dt_max));

  const VectorField k1 = rhs(s.y);
  const VectorField k2 = rhs(s.y + k1 * (0.5 * dt));
  const VectorField k3 = rhs(s.y + k2 * (0.5 * dt));
  const VectorField k4 = rhs(s.y + k3 * dt);

  AhtState out;
  out.t = s.t + dt;
  out.y = s.y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
  out.filter_energy_removed = s.filter_energy_removed;
  if (opt.filter) out.filter_energy_removed += apply_filter(out.y);
  check_finite(out.y, "step");

  auto pr = leray_project(out.y);
  out.u = std::move(pr.u);
  out.p = std::move(pr.p);
  out.div_residual = pr.div_residual;
  out.bc_residual = pr.bc_residual;
  out.last_dt = dt;
  out.cfl_fraction = std::abs(dt) / dt_max;
  return out;
}

double transport_cost(const AhtState& s) {
  const auto& g = s.y.grid();
  require(g->kind() != DomainKind::Torus, ErrorCode::WrongDomain,
          "transport cost needs the identity map on the domain; undefined on the torus");
  ScalarField c(g);
  for (int a = 0; a < g->n1(); ++a)
    for (int b = 0; b < g->n2(); ++b) {
      const Vec2 d = s.y.at(a, b) - g->node(a, b);
      c(a, b) = 0.5 * d.dot(d);
    }
  return c.integral();
}

double dissipation_residual(const DiagnosticsRecord& a, const DiagnosticsRecord& b) {
  require(std::isfinite(a.cost) && std::isfinite(b.cost), ErrorCode::WrongDomain,
          "dissipation residual needs the transport cost (disk/annulus records)");
  require(b.t > a.t, ErrorCode::InvalidArgument, "records must be ordered in time");
  return std::abs((b.cost - a.cost) / (b.t - a.t) + 0.5 * (a.kinetic + b.kinetic));
}

TestBattery default_battery(uint64_t seed) {
  TestBattery bat;
  // monomials v1^i v2^j (i + j <= 4) times exp(-(|v|/4)^8): smooth, numerically supported in
  // the range the presets produce
  for (int d = 0; d <= 4; ++d)
    for (int i = d; i >= 0; --i) {
      const int j = d - i;
      bat.names.push_back("m" + std::to_string(i) + std::to_string(j));
      bat.fns.push_back([i, j](Vec2 v) {
        const double s2 = (v.x * v.x + v.y * v.y) / 16.0;
        return std::pow(v.x, i) * std::pow(v.y, j) * std::exp(-s2 * s2 * s2 * s2);
      });
    }
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int gsh = 0; gsh < 3; ++gsh) {
    const double cx = unif(eng), cy = unif(eng);
    const double w = 0.5 + 0.25 * (unif(eng) + 1.0);
    bat.names.push_back("gauss" + std::to_string(gsh));
    bat.fns.push_back([cx, cy, w](Vec2 v) {
      const double dx = v.x - cx, dy = v.y - cy;
      return std::exp(-(dx * dx + dy * dy) / (w * w));
    });
  }
  return bat;
}

std::vector<double> rearrangement_drift(const VectorField& y, const VectorField& y_ref,
                                        const TestBattery& battery) {
  check_same_grid(y.grid(), y_ref.grid(), "rearrangement_drift");
  std::vector<double> out;
  out.reserve(battery.fns.size());
  ScalarField tmp(y.grid());
  for (const auto& f : battery.fns) {
    for (int n = 0; n < tmp.size(); ++n)
      tmp[n] = f({y.comp(0)[n], y.comp(1)[n]});
    const double now = tmp.integral();
    for (int n = 0; n < tmp.size(); ++n)
      tmp[n] = f({y_ref.comp(0)[n], y_ref.comp(1)[n]});
    const double ref = tmp.integral();
    out.push_back(std::abs(now - ref) / (1.0 + std::abs(ref)));
  }
  return out;
}

DiagnosticsRecord diagnose(const AhtState& s, const VectorField* y_ref,
                           const TestBattery* battery) {
  DiagnosticsRecord r;
  r.t = s.t;
  if (s.y.grid()->kind() != DomainKind::Torus) r.cost = transport_cost(s);
  r.kinetic = squared_speed_integral(s.u);
  r.u_sup = s.u.sup_abs();
  r.y_sup = s.y.sup_abs();
  r.div_residual = s.div_residual;
  r.bc_residual = s.bc_residual;
  r.filter_energy_removed = s.filter_energy_removed;
  if (y_ref && battery) r.drift = rearrangement_drift(s.y, *y_ref, *battery);
  return r;
}

RunResult run(const AhtState& s0, const RunOptions& opt) {
  require(opt.T > 0, ErrorCode::InvalidArgument, "run needs T > 0");
  require(opt.sample_every > 0, ErrorCode::InvalidArgument, "run needs sample_every > 0");
  const StepOptions sopt{opt.cfl_safety, opt.filter};
  const TestBattery battery = opt.with_drift ? default_battery() : TestBattery{};
  const VectorField* ref = opt.with_drift ? &s0.y : nullptr;
  const TestBattery* bat = opt.with_drift ? &battery : nullptr;

  RunResult res;
  AhtState s = s0;
  res.snapshots.push_back(s);
  res.records.push_back(diagnose(s, ref, bat));

  double next_sample = opt.sample_every;
  const double t_end = s0.t + opt.T;
  while (s.t < t_end - 1e-13) {
    if (s.u.sup_abs() <= opt.steady_tol) {
      res.terminated_steady = true;
      break;
    }
    double dt = opt.fixed_dt > 0 ? opt.fixed_dt : max_cfl_dt(s, opt.cfl_safety);
    dt = std::min({dt, t_end - s.t, s0.t + next_sample - s.t});
    s = step(s, dt, sopt);
    if (s.t >= s0.t + next_sample - 1e-13 || s.t >= t_end - 1e-13) {
      res.snapshots.push_back(s);
      res.records.push_back(diagnose(s, ref, bat));
      while (next_sample <= s.t - s0.t + 1e-13) next_sample += opt.sample_every;
    }
  }
  if (res.terminated_steady && res.snapshots.back().t < s.t) {
    res.snapshots.push_back(s);
    res.records.push_back(diagnose(s, ref, bat));
  }
  return res;
}

}  // namespace aht
