#include "aht/kato.hpp"

#include <algorithm>
#include <cmath>

#include "aht/elliptic.hpp"
#include "aht/evaluate.hpp"
#include "aht/leray.hpp"
#include "aht/operators.hpp"
#include "aht/symbolic.hpp"

namespace aht {

namespace {

// the transported-loop series with the bare D^k psi term removed: what remains references only
// orders < k and its circulations/means equal those of D^k u
KernelExpr kernel_rest(int k) {
  KernelExpr e = loop_kernel_series(k);
  const size_t removed = e.terms.erase(KernelKey{{}, k});
  require(removed == 1, ErrorCode::WrongShape, "loop kernel lacks its leading term");
  return e;
}

}  // namespace

KatoDerivatives kato_ladder(const VectorField& y, int K, const KatoOptions& opt) {
  require(K >= 1 && K <= kMaxSeriesOrder, ErrorCode::OrderTooLarge,
          "ladder order must lie in 1.." + std::to_string(kMaxSeriesOrder));
  const auto& g = y.grid();
  const bool torus = g->kind() == DomainKind::Torus;
  const double gate_rel = opt.residual_gate_rel > 0 ? opt.residual_gate_rel : (torus ? 1e-6 : 0.25);

  KatoDerivatives kd;
  kd.y = y;
  kd.y_norm = norm_surrogate(y);
  kd.Du.push_back(leray_project(y).u);

  std::unique_ptr<SignedDistance> sd;
  if (!torus) sd = std::make_unique<SignedDistance>(g->domain());

  for (int k = 1; k <= K; ++k) {
    const EvalContext ctx(kd.y, kd.Du, sd.get());
    LadderLevel lvl;
    lvl.k = k;

    HodgeData data;
    data.div = evaluate(divergence_series(k), ctx);
    data.curl = evaluate(vorticity_series(k), ctx);
    if (torus) {
      // the continuum series have zero mean; remove the discretization-induced remainder and
      // record it (the compatible-subspace projection)
      lvl.div_shift = data.div.mean();
      lvl.curl_shift = data.curl.mean();
      for (int n = 0; n < data.div.size(); ++n) data.div[n] -= lvl.div_shift;
      for (int n = 0; n < data.curl.size(); ++n) data.curl[n] -= lvl.curl_shift;
      data.constraints = harmonic_projection(evaluate(kernel_rest(k), ctx));
    } else {
      data.normal = evaluate(boundary_flux_series(k), ctx);
      // the continuum div/flux pair is exactly compatible; remove the discretization defect by
      // the constant-shift projection and record it
      lvl.div_shift = (data.div.integral() - data.normal->integral()) / g->domain().area();
      for (int n = 0; n < data.div.size(); ++n) data.div[n] -= lvl.div_shift;
      if (g->kind() == DomainKind::Annulus)
        data.constraints = {circulation(evaluate(kernel_rest(k), ctx), g->homology_loop())};
    }

    HodgeReport rep;
    VectorField Dku = div_curl_reconstruct(data, &rep);
    lvl.norm = norm_surrogate(Dku);
    lvl.div_res = rep.div_res;
    lvl.curl_res = rep.curl_res;
    lvl.bc_res = rep.bc_res;
    lvl.circ_res = rep.constraint_err;
    if (!torus) lvl.div_shift += rep.compat_shift;

    if (opt.enforce_gate) {
      // near-steady states make the level field pure cancellation noise; the honest residual
      // scale is then set by the reconstruction data, not the (tiny) field norm
      const double data_scale = data.div.sup_abs() + data.curl.sup_abs() +
                                (data.normal ? data.normal->sup_abs() : 0.0);
      const double gate = gate_rel * (lvl.norm + data_scale) + 1e-9;
      const double worst = std::max({lvl.div_res, lvl.curl_res, lvl.bc_res, lvl.circ_res});
      require(worst <= gate, ErrorCode::ResidualTooLarge,
              "ladder level " + std::to_string(k) + " residual " + std::to_string(worst) +
                  " exceeds gate " + std::to_string(gate));
    }

    kd.Du.push_back(std::move(Dku));
    kd.levels.push_back(lvl);
  }
  return kd;
}

ScalarField direct_P_field(const VectorField& y) {
  auto pr = leray_project(y);
  const VectorField m = advect(pr.u, jacobian(y));
  ScalarField g;
  if (y.grid()->kind() == DomainKind::Torus) {
    g = solve_periodic_poisson(divergence(m));
  } else {
    // div and flux of the same field: remove the (pure truncation) compatibility defect
    ScalarField a = divergence(m);
    BoundaryTrace b = normal_trace(m);
    const double shift = (a.integral() - b.integral()) / y.grid()->domain().area();
    for (int n = 0; n < a.size(); ++n) a[n] -= shift;
    g = solve_neumann(a, b);
  }
  const VectorField psi = y - pr.u;
  for (int n = 0; n < g.size(); ++n)
    g[n] -= pr.u.comp(0)[n] * psi.comp(0)[n] + pr.u.comp(1)[n] * psi.comp(1)[n];
  return g;
}

VectorField material_derivative_direct(const VectorField& y) {
  auto pr = leray_project(y);
  const VectorField psi = y - pr.u;
  return gradient(direct_P_field(y)) + apply_transpose(jacobian(pr.u), psi);
}

// --- finite-difference oracle ------------------------------------------------------------------

namespace {

// Fornberg's recurrence: weights of the m-th derivative at 0 for the given nodes
std::vector<double> fornberg_weights(int m, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int s = mn; s >= 1; --s) c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int s = mn; s >= 1; --s) c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

// velocity snapshots on the times q * dt_quarter, q = 0..nsteps (dt_quarter may be negative)
struct Lattice {
  double dt = 0;
  std::vector<VectorField> u;
};

Lattice build_lattice(const AhtState& s0, double dt_quarter, int nsteps, const StepOptions& sopt) {
  Lattice lat;
  lat.dt = dt_quarter;
  lat.u.reserve(static_cast<size_t>(nsteps) + 1);
  lat.u.push_back(s0.u);
  AhtState s = s0;
  for (int q = 1; q <= nsteps; ++q) {
    const double cap = max_cfl_dt(s, sopt.cfl_safety);
    int nsub = 1;
    if (std::isfinite(cap)) nsub = std::max(1, (int)std::ceil(std::abs(dt_quarter) / cap - 1e-12));
    const double sub = dt_quarter / nsub;
    for (int j = 0; j < nsub; ++j) s = step(s, sub, sopt);
    lat.u.push_back(s.u);
  }
  return lat;
}

Vec2 eval_u(const VectorField& u, Vec2 x) {
  static const EvalOptions kOpt{true};
  return eval_at(u, x, kOpt);
}

// keep polar trajectories inside the closed domain; tangency drift is projected back
Vec2 clamp_to_domain(const GridPtr& g, Vec2 x) {
  if (g->kind() == DomainKind::Torus) return x;
  const Domain& d = g->domain();
  const double r = x.norm();
  const double r_hi = d.kind == DomainKind::Disk ? d.radius : d.r_outer;
  const double slack = 0.5 * g->h1();
  require(r <= r_hi + slack, ErrorCode::LeftDomain, "trajectory left the domain outward");
  if (r > r_hi) return x * (r_hi / r);
  if (d.kind == DomainKind::Annulus) {
    require(r >= d.r_inner - slack, ErrorCode::LeftDomain, "trajectory left the domain inward");
    if (r < d.r_inner) return x * (d.r_inner / r);
  }
  return x;
}

// u(t_j, Phi(t_j, x0)) at the stencil nodes t_j = j * (4 dt), j = 1..jmax, by RK4 over two
// lattice intervals per step (all stage times land on the lattice)
std::vector<Vec2> stencil_values(const Lattice& lat, const GridPtr& g, Vec2 x0, int jmax) {
  std::vector<Vec2> vals;
  vals.reserve(static_cast<size_t>(jmax));
  Vec2 x = x0;
  const double dt = 2.0 * lat.dt;
  for (int i = 0; i < 2 * jmax; ++i) {
    const int q = 2 * i;
    const Vec2 k1 = eval_u(lat.u[q], x);
    const Vec2 k2 = eval_u(lat.u[q + 1], clamp_to_domain(g, x + 0.5 * dt * k1));
    const Vec2 k3 = eval_u(lat.u[q + 1], clamp_to_domain(g, x + 0.5 * dt * k2));
    const Vec2 k4 = eval_u(lat.u[q + 2], clamp_to_domain(g, x + dt * k3));
    x = clamp_to_domain(g, x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    if (i % 2 == 1) vals.push_back(eval_u(lat.u[q + 2], x));
  }
  return vals;
}

}  // namespace

std::vector<FdSample> fd_oracle(const VectorField& y0, const std::vector<Vec2>& seeds, int k,
                                const FdOracleOptions& opt) {
  require(k >= 1 && k <= 4, ErrorCode::OrderTooLarge, "oracle supports k = 1..4");
  require(!seeds.empty(), ErrorCode::InvalidArgument, "no seeds supplied");
  require(opt.max_halvings >= 1, ErrorCode::InvalidArgument, "need at least one halving");
  const auto& g = y0.grid();
  const AhtState s0 = make_state(y0);
  const StepOptions sopt{opt.cfl_safety, opt.filter};
  const double h0 = opt.h > 0 ? opt.h : 1e-3 / std::max(norm_surrogate(y0), 1e-6);
  const int jmax = k + 1;

  std::vector<double> nodes;
  for (int j = -jmax; j <= jmax; ++j) nodes.push_back(j);
  const std::vector<double> w = fornberg_weights(k, nodes);

  const size_t ns = seeds.size();
  auto values_at = [&](double h) {
    const Lattice fwd = build_lattice(s0, h / 4.0, 4 * jmax, sopt);
    const Lattice bwd = build_lattice(s0, -h / 4.0, 4 * jmax, sopt);
    std::vector<Vec2> out(ns);
    for (size_t i = 0; i < ns; ++i) {
      const Vec2 x0 = seeds[i];
      require(g->domain().contains(x0), ErrorCode::LeftDomain, "seed outside the domain");
      const std::vector<Vec2> fv = stencil_values(fwd, g, x0, jmax);
      const std::vector<Vec2> bv = stencil_values(bwd, g, x0, jmax);
      Vec2 sum{0, 0};
      for (int j = -jmax; j <= jmax; ++j) {
        Vec2 f;
        if (j == 0)
          f = eval_u(s0.u, x0);
        else
          f = j > 0 ? fv[static_cast<size_t>(j) - 1] : bv[static_cast<size_t>(-j) - 1];
        sum = sum + w[static_cast<size_t>(j + jmax)] * f;
      }
      out[i] = sum * (1.0 / std::pow(h, k));
    }
    return out;
  };

  std::vector<FdSample> samples(ns);
  std::vector<bool> accepted(ns, false);
  std::vector<Vec2> prev = values_at(h0);
  double h = h0;
  for (int lev = 1; lev <= opt.max_halvings; ++lev) {
    h *= 0.5;
    const std::vector<Vec2> cur = values_at(h);
    bool all = true;
    for (size_t i = 0; i < ns; ++i) {
      if (accepted[i]) continue;
      const double diff = (cur[i] - prev[i]).norm();
      samples[i] = FdSample{seeds[i], cur[i], diff, h};
      if (diff <= opt.rel_tol * cur[i].norm() + opt.abs_floor)
        accepted[i] = true;
      else
        all = false;
    }
    prev = cur;
    if (all) break;
  }
  for (size_t i = 0; i < ns; ++i) {
    if (accepted[i]) continue;
    require(samples[i].noise <= 0.5 * std::max(samples[i].value.norm(), opt.abs_floor),
            ErrorCode::UnstableStencil,
            "time stencil noise exceeds half the value at seed " + std::to_string(i));
  }
  return samples;
}

}  // namespace aht
