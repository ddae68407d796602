#include "aht/leray.hpp"

#include <cmath>

#include "aht/elliptic.hpp"
#include "aht/fft.hpp"
#include "aht/operators.hpp"
#include "aht/presets.hpp"

namespace aht {

namespace {

VectorField perp_gradient(const ScalarField& psi) {
  VectorField g = gradient(psi);
  ScalarField c0 = g.comp(1);
  c0 *= -1.0;
  return VectorField(std::move(c0), g.comp(0));
}

LerayResult leray_torus(const VectorField& y) {
  const auto& g = y.grid();
  const auto& sp = TorusSpectral::get(g);
  std::vector<std::complex<double>> Y1, Y2;
  sp.forward(y.comp(0), Y1);
  sp.forward(y.comp(1), Y2);
  std::vector<std::complex<double>> P(Y1.size());
  const std::complex<double> I(0, 1);
  for (int i = 0; i < sp.n1(); ++i)
    for (int j = 0; j < sp.nc(); ++j) {
      int n = sp.cindex(i, j);
      double k1 = sp.k1_deriv(i), k2 = sp.k2_deriv(j);
      double kk = k1 * k1 + k2 * k2;
      if (kk == 0) {
        P[n] = 0;  // mean and Nyquist rows pass through the projector
        continue;
      }
      std::complex<double> kdoty = k1 * Y1[n] + k2 * Y2[n];
      P[n] = -I * kdoty / kk;  // p_hat with grad p = y - u
      Y1[n] -= k1 * kdoty / kk;
      Y2[n] -= k2 * kdoty / kk;
    }
  LerayResult r;
  r.u = VectorField(g);
  r.p = ScalarField(g);
  sp.backward(Y1, r.u.comp(0));
  sp.backward(Y2, r.u.comp(1));
  sp.backward(P, r.p);
  r.div_residual = divergence(r.u).sup_abs();
  r.bc_residual = 0;
  return r;
}

}  // namespace

LerayResult leray_project(const VectorField& y) {
  require(y.finite(), ErrorCode::NonFiniteField, "projection of non-finite data");
  const auto& g = y.grid();
  if (!g->is_polar()) return leray_torus(y);

  ScalarField a = divergence(y);
  BoundaryTrace b = normal_trace(y);
  // div and flux come from the same field, so their continuum pair is compatible by the
  // divergence theorem: the discrete defect is pure truncation error. Project it out here
  // (and record it) instead of asking the solver's incompatible-data gate to judge it, which
  // would misfire on noise-level data such as a second projection.
  const double shift = (a.integral() - b.integral()) / g->domain().area();
  for (int n = 0; n < a.size(); ++n) a[n] -= shift;
  NeumannReport rep;
  ScalarField p = solve_neumann(a, b, {}, &rep);
  LerayResult r;
  r.p = std::move(p);
  r.u = y - gradient(r.p);
  r.compat_shift = shift + rep.projection_shift;
  r.div_residual = divergence(r.u).sup_abs();
  r.bc_residual = normal_trace(r.u).sup_abs();
  return r;
}

VectorField div_curl_reconstruct(const HodgeData& data, HodgeReport* report) {
  const auto& g = data.div.grid();
  check_same_grid(g, data.curl.grid(), "reconstruct");
  const Domain& dom = g->domain();

  VectorField u(g);
  double compat_shift = 0;

  if (!g->is_polar()) {
    require(data.constraints.size() == 2, ErrorCode::IncompatibleData,
            "torus reconstruction needs the two mean constraints");
    require(!data.normal.has_value(), ErrorCode::NoBoundary, "torus has no boundary trace");
    double scale_a = data.div.sup_abs() + 1e-300, scale_w = data.curl.sup_abs() + 1e-300;
    require(std::abs(data.div.integral()) <= 1e-10 * scale_a * dom.area() + 1e-300,
            ErrorCode::NonzeroMean, "divergence target must have zero mean on the torus");
    require(std::abs(data.curl.integral()) <= 1e-10 * scale_w * dom.area() + 1e-300,
            ErrorCode::NonzeroMean, "curl target must have zero mean on the torus");
    const auto& sp = TorusSpectral::get(g);
    std::vector<std::complex<double>> A, W;
    sp.forward(data.div, A);
    sp.forward(data.curl, W);
    std::vector<std::complex<double>> U1(A.size()), U2(A.size());
    const std::complex<double> I(0, 1);
    for (int i = 0; i < sp.n1(); ++i)
      for (int j = 0; j < sp.nc(); ++j) {
        int n = sp.cindex(i, j);
        double k1 = sp.k1_deriv(i), k2 = sp.k2_deriv(j);
        double kk = k1 * k1 + k2 * k2;
        if (kk == 0) {
          U1[n] = U2[n] = 0;
          continue;
        }
        U1[n] = (-I * k1 * A[n] + I * k2 * W[n]) / kk;
        U2[n] = (-I * k2 * A[n] - I * k1 * W[n]) / kk;
      }
    U1[sp.cindex(0, 0)] = data.constraints[0];
    U2[sp.cindex(0, 0)] = data.constraints[1];
    sp.backward(U1, u.comp(0));
    sp.backward(U2, u.comp(1));
  } else {
    require(data.normal.has_value(), ErrorCode::IncompatibleData,
            "disk/annulus reconstruction needs the normal trace");
    check_same_grid(g, data.normal->grid(), "reconstruct trace");
    size_t want = dom.kind == DomainKind::Disk ? 0 : 1;
    require(data.constraints.size() == want, ErrorCode::IncompatibleData,
            "constraint vector size does not match the domain homology");
    ScalarField psi = solve_dirichlet(data.curl, BoundaryTrace(g, 0.0));
    NeumannReport rep;
    ScalarField phi = solve_neumann(data.div, *data.normal, {1e-3}, &rep);
    compat_shift = rep.projection_shift;
    u = gradient(phi) + perp_gradient(psi);
    if (dom.kind == DomainKind::Annulus) {
      HomologyLoop loop = g->homology_loop();
      double beta = (data.constraints[0] - circulation(u, loop)) / (2 * M_PI);
      for (int a = 0; a < g->n1(); ++a)
        for (int b = 0; b < g->n2(); ++b) {
          Vec2 p = g->node(a, b);
          double rr = p.x * p.x + p.y * p.y;
          u.set(a, b, u.at(a, b) + Vec2{-beta * p.y / rr, beta * p.x / rr});
        }
    }
  }

  if (report) {
    report->compat_shift = compat_shift;
    report->div_res = (divergence(u) - data.div).sup_abs();
    report->curl_res = (curl(u) - data.curl).sup_abs();
    if (g->is_polar()) {
      BoundaryTrace bt = normal_trace(u);
      bt -= *data.normal;
      report->bc_res = bt.sup_abs();
    }
    auto pi = harmonic_projection(u);
    double err = 0;
    for (size_t i = 0; i < pi.size(); ++i) err = std::max(err, std::abs(pi[i] - data.constraints[i]));
    report->constraint_err = err;
  }
  return u;
}

double estimate_regularity_constant(const GridPtr& g, int trials, uint64_t seed) {
  require(trials > 0, ErrorCode::InvalidArgument, "need at least one trial");
  double best = 0;
  for (int t = 0; t < trials; ++t) {
    VectorField f = random_vector(g, {seed + (uint64_t)t, 1.0, 0.55, 5});
    double num = norm_surrogate(f);
    double den = norm_surrogate(divergence(f)) + norm_surrogate(curl(f));
    if (g->is_polar()) den += trace_norm_surrogate(normal_trace(f));
    auto pi = harmonic_projection(f);
    double pin = 0;
    for (double c : pi) pin += c * c;
    den += std::sqrt(pin);
    if (den <= 1e-14 * num) continue;  // zero-data trial: skipped, contributes nothing
    best = std::max(best, num / den);
  }
  require(best > 0, ErrorCode::ResidualTooLarge, "all regularity trials degenerate");
  return best;
}

double estimate_projection_constant(const GridPtr& g, int trials, uint64_t seed) {
  require(trials > 0, ErrorCode::InvalidArgument, "need at least one trial");
  double best = 0;
  for (int t = 0; t < trials; ++t) {
    VectorField y = random_vector(g, {seed + 101 * (uint64_t)t + 7, 1.0, 0.55, 5});
    double ny = norm_surrogate(y);
    if (ny <= 1e-14) continue;
    best = std::max(best, norm_surrogate(leray_project(y).u) / ny);
  }
  require(best > 0, ErrorCode::ResidualTooLarge, "all projection trials degenerate");
  return best;
}

}  // namespace aht
