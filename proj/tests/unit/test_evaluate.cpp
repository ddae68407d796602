#include <doctest.h>

#include <cmath>

#include "aht/evaluate.hpp"
#include "aht/kato.hpp"
#include "aht/leray.hpp"
#include "aht/operators.hpp"
#include "aht/presets.hpp"

using namespace aht;

namespace {

// explicit 2x2 chain product at one node, written out long-hand as an independent oracle
struct M2 {
  double a[2][2];
};
M2 jac_at(const JacobianField& J, int i, int j) {
  M2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m.a[r][c] = J.m[r][c](i, j);
  return m;
}
M2 mul(const M2& x, const M2& y) {
  M2 z;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) z.a[r][c] = x.a[r][0] * y.a[0][c] + x.a[r][1] * y.a[1][c];
  return z;
}

}  // namespace

TEST_CASE("matrix expressions against an analytic field") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 64, 64);
  // y = (sin x2, sin x1) is divergence-free with zero mean, so u = P y = y
  VectorField y(g, [](Vec2 q) { return Vec2{std::sin(q.y), std::sin(q.x)}; });
  VectorField u = leray_project(y).u;
  REQUIRE((u - y).sup_abs() < 1e-12);
  std::vector<VectorField> Du{u};
  EvalContext ctx(y, Du);

  // tr{grad u . grad u} = 2 cos x1 cos x2
  MatExpr e;
  e.bridge = Bridge::Trace;
  e.add(MatKey{false, {0, 0}}, 1);
  ScalarField v = evaluate(e, ctx);
  double worst = 0;
  for (int a = 0; a < g->n1(); ++a)
    for (int b = 0; b < g->n2(); ++b) {
      Vec2 x = g->node(a, b);
      worst = std::max(worst, std::abs(v(a, b) - 2.0 * std::cos(x.x) * std::cos(x.y)));
    }
  CHECK(worst < 1e-4);

  // tr{grad y} is the divergence, as{grad y} is the curl
  MatExpr tr1;
  tr1.add(MatKey{true, {}}, 1);
  ScalarField dv = evaluate(tr1, ctx);
  ScalarField dref = divergence(y);
  MatExpr as1;
  as1.bridge = Bridge::Asym;
  as1.add(MatKey{true, {}}, 1);
  ScalarField cv = evaluate(as1, ctx);
  ScalarField cref = curl(y);
  double dmax = 0, cmax = 0;
  for (int n = 0; n < dv.size(); ++n) {
    dmax = std::max(dmax, std::abs(dv[n] - dref[n]));
    cmax = std::max(cmax, std::abs(cv[n] - cref[n]));
  }
  CHECK(dmax < 1e-12);
  CHECK(cmax < 1e-12);

  // an expression with no terms is the zero field
  MatExpr none;
  CHECK(evaluate(none, ctx).sup_abs() == 0.0);
}

TEST_CASE("matrix chains match a long-hand pointwise product") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 32, 32);
  VectorField y = random_vector(g, {14, 0.8, 0.7, 4});
  KatoDerivatives kd = kato_ladder(y, 2);
  EvalContext ctx(kd.y, kd.Du);

  MatExpr e;
  e.bridge = Bridge::Trace;
  e.add(MatKey{true, {0, 1}}, 3);   // 3 tr{grad y . grad u . grad D u}
  e.add(MatKey{false, {1, 0}}, -2); // -2 tr{grad D u . grad u}
  ScalarField v = evaluate(e, ctx);

  MatExpr ea;
  ea.bridge = Bridge::Asym;
  ea.add(MatKey{false, {0, 1}}, 1);  // as{grad u . grad D u}
  ScalarField w = evaluate(ea, ctx);

  JacobianField Jy = jacobian(kd.y);
  JacobianField J0 = jacobian(kd.Du[0]);
  JacobianField J1 = jacobian(kd.Du[1]);

  const int probes[][2] = {{0, 0}, {5, 17}, {13, 2}, {21, 30}, {31, 31}, {8, 8}};
  for (auto& p : probes) {
    M2 my = jac_at(Jy, p[0], p[1]);
    M2 m0 = jac_at(J0, p[0], p[1]);
    M2 m1 = jac_at(J1, p[0], p[1]);
    M2 t1 = mul(mul(my, m0), m1);
    M2 t2 = mul(m1, m0);
    const double expect = 3.0 * (t1.a[0][0] + t1.a[1][1]) - 2.0 * (t2.a[0][0] + t2.a[1][1]);
    CHECK(v(p[0], p[1]) == doctest::Approx(expect).epsilon(1e-12));
    M2 ta = mul(m0, m1);
    CHECK(w(p[0], p[1]) == doctest::Approx(ta.a[1][0] - ta.a[0][1]).epsilon(1e-12));
  }
}

TEST_CASE("evaluation context: psi chain and missing factors") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 32, 32);
  VectorField y = random_vector(g, {15, 0.6, 0.7, 4});
  KatoDerivatives kd = kato_ladder(y, 2);
  EvalContext ctx(kd.y, kd.Du);
  CHECK(ctx.max_order() == 2);

  // psi = y - u, D^j psi = -D^j u for j >= 1 (since D y = 0)
  CHECK((ctx.psi() - (kd.y - kd.Du[0])).sup_abs() == 0.0);
  CHECK((ctx.Dpsi(0) - ctx.psi()).sup_abs() == 0.0);
  CHECK((ctx.Dpsi(2) + kd.Du[2]).sup_abs() == 0.0);

  // the kernel with an empty jacobian chain is the bare flux derivative
  KernelExpr bare;
  bare.add(KernelKey{{}, 1}, 1);
  CHECK((evaluate(bare, ctx) + kd.Du[1]).sup_abs() == 0.0);

  // (grad u)^T psi, long-hand
  KernelExpr one;
  one.add(KernelKey{{0}, 0}, 2);
  VectorField k1 = evaluate(one, ctx);
  JacobianField J0 = jacobian(kd.Du[0]);
  Vec2 ps = ctx.psi().at(7, 11);
  Vec2 expect{2.0 * (J0.m[0][0](7, 11) * ps.x + J0.m[1][0](7, 11) * ps.y),
              2.0 * (J0.m[0][1](7, 11) * ps.x + J0.m[1][1](7, 11) * ps.y)};
  CHECK(k1.at(7, 11).x == doctest::Approx(expect.x).epsilon(1e-12));
  CHECK(k1.at(7, 11).y == doctest::Approx(expect.y).epsilon(1e-12));

  // factors beyond the supplied ladder are an error, not silent zeros
  MatExpr deep;
  deep.add(MatKey{false, {5}}, 1);
  CHECK_THROWS_AS(evaluate(deep, ctx), Error);
  KernelExpr deepk;
  deepk.add(KernelKey{{}, 7}, 1);
  CHECK_THROWS_AS(evaluate(deepk, ctx), Error);
}

TEST_CASE("boundary expressions: distance tensors against the disk closed form") {
  auto g = Grid2D::create(Domain::disk(1.5), 48, 96);
  VectorField y = random_vector(g, {16, 0.8, 0.7, 4});
  VectorField u = leray_project(y).u;
  std::vector<VectorField> Du{u};
  SignedDistance sd(g->domain());
  EvalContext ctx(y, Du, &sd);

  // grad rho {u} is the normal flux
  RhoExpr flux;
  flux.add(RhoKey{{0}}, 1);
  BoundaryTrace bf = evaluate(flux, ctx);
  BoundaryTrace bn = normal_trace(u);
  double w1 = 0;
  for (int i = 0; i < g->n2(); ++i) w1 = std::max(w1, std::abs(bf(0, i) - bn(0, i)));
  CHECK(w1 < 1e-12);

  // grad^2 rho {u, u} = (|u|^2 - (u.n)^2)/|x| for the disk distance
  RhoExpr hess;
  hess.add(RhoKey{{0, 0}}, 1);
  BoundaryTrace bh = evaluate(hess, ctx);
  const int ring = g->boundary_ring(0);
  double w2 = 0;
  for (int i = 0; i < g->n2(); ++i) {
    Vec2 x = g->boundary_node(0, i);
    Vec2 v = u.at(ring, i);
    const double r = std::hypot(x.x, x.y);
    const double un = (v.x * x.x + v.y * x.y) / r;
    const double expect = (v.x * v.x + v.y * v.y - un * un) / r;
    w2 = std::max(w2, std::abs(bh(0, i) - expect));
  }
  CHECK(w2 < 1e-12);

  // the first flux identity is exactly -grad^2 rho{u,u}
  RhoExpr s1 = boundary_flux_series(1);
  REQUIRE(s1.terms.size() == 1);
  CHECK(s1.terms.begin()->first.args == std::vector<int>{0, 0});
  CHECK(s1.terms.begin()->second == -1);
  BoundaryTrace bs = evaluate(s1, ctx);
  double w3 = 0;
  for (int i = 0; i < g->n2(); ++i) w3 = std::max(w3, std::abs(bs(0, i) + bh(0, i)));
  CHECK(w3 == 0.0);

  // locus and order gates
  auto gt = Grid2D::create(Domain::torus(2 * M_PI), 32, 32);
  VectorField yt = random_vector(gt, {1, 0.5, 0.7, 3});
  std::vector<VectorField> Dut{leray_project(yt).u};
  EvalContext ctxt(yt, Dut);
  CHECK_THROWS_AS(evaluate(flux, ctxt), Error);

  RhoExpr deep;
  deep.add(RhoKey{std::vector<int>(sd.s_max() + 1, 0)}, 1);
  CHECK_THROWS_AS(evaluate(deep, ctx), Error);
}
