#include <doctest.h>

#include <cmath>

#include "aht/elliptic.hpp"
#include "aht/field.hpp"

using namespace aht;

namespace {
double sup_err(const ScalarField& got, std::function<double(Vec2)> want) {
  const auto& g = got.grid();
  double m = 0;
  for (int a = 0; a < g->n1(); ++a)
    for (int b = 0; b < g->n2(); ++b) m = std::max(m, std::abs(got(a, b) - want(g->node(a, b))));
  return m;
}
}  // namespace

TEST_CASE("periodic poisson is spectrally exact and guards the mean") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 48, 48);
  auto pstar = [](Vec2 p) { return std::sin(p.x) * std::cos(p.y) + std::cos(3 * p.y); };
  ScalarField f(g, [](Vec2 p) { return -2 * std::sin(p.x) * std::cos(p.y) - 9 * std::cos(3 * p.y); });
  ScalarField p = solve_periodic_poisson(f);
  CHECK(sup_err(p, pstar) < 1e-12);
  CHECK(std::abs(p.mean()) < 1e-13);

  ScalarField bad(g, 1.0);  // nonzero mean has no periodic solution
  CHECK_THROWS_AS(solve_periodic_poisson(bad), Error);
}

TEST_CASE("disk neumann: quadratic data is reproduced to roundoff") {
  auto g = Grid2D::create(Domain::disk(1.5), 48, 64);
  const double R = 1.5;

  SUBCASE("pure m=2 mode, the regular blocks") {
    // p* = x1 x2, lap p* = 0, dp*/dn = 2 x1 x2 / R on |x| = R
    ScalarField f(g, 0.0);
    BoundaryTrace b(g);
    for (int i = 0; i < g->n2(); ++i) {
      Vec2 q = g->boundary_node(0, i);
      b(0, i) = 2 * q.x * q.y / R;
    }
    ScalarField p = solve_neumann(f, b);
    CHECK(sup_err(p, [](Vec2 q) { return q.x * q.y; }) < 1e-10);
  }

  SUBCASE("pure m=0 mode, the singular pinned block") {
    // p* = r^2: every discrete row is exact on quadratics, so the solve returns p* up to the
    // constant the zero-mean normalization picks (the discrete mean of p*, not the continuous one)
    ScalarField f(g, 4.0);
    BoundaryTrace b(g, 2 * R);
    NeumannReport rep;
    ScalarField p = solve_neumann(f, b, {}, &rep);
    ScalarField pstar(g, [](Vec2 q) { return q.x * q.x + q.y * q.y; });
    double shift = pstar.mean();
    CHECK(sup_err(p, [&](Vec2 q) { return q.x * q.x + q.y * q.y - shift; }) < 1e-8);
    CHECK(std::abs(rep.compat_residual) < 1e-9);
    CHECK(std::abs(p.mean()) < 1e-10);
  }

  SUBCASE("incompatible data is rejected, loose gates project instead") {
    ScalarField f(g, 1.0);
    BoundaryTrace b(g, 0.0);  // int f = area != 0 = boundary flux
    CHECK_THROWS_AS(solve_neumann(f, b), Error);
    NeumannOptions loose;
    loose.compat_rel_tol = 1.0;
    NeumannReport rep;
    ScalarField p = solve_neumann(f, b, loose, &rep);
    CHECK(rep.compat_residual == doctest::Approx(g->domain().area()).epsilon(1e-10));
    CHECK(std::abs(rep.projection_shift - 1.0) < 1e-10);  // f - shift becomes compatible
  }
}

TEST_CASE("disk dirichlet: quadratic data is reproduced to roundoff") {
  auto g = Grid2D::create(Domain::disk(1.5), 48, 64);
  ScalarField f(g, 0.0);
  BoundaryTrace bc(g);
  for (int i = 0; i < g->n2(); ++i) {
    Vec2 q = g->boundary_node(0, i);
    bc(0, i) = q.x * q.y;
  }
  ScalarField p = solve_dirichlet(f, bc);
  CHECK(sup_err(p, [](Vec2 q) { return q.x * q.y; }) < 1e-10);

  // and a nonharmonic one: p* = r^2 (constant shift irrelevant for dirichlet)
  ScalarField f2(g, 4.0);
  BoundaryTrace bc2(g, 1.5 * 1.5);
  ScalarField p2 = solve_dirichlet(f2, bc2);
  CHECK(sup_err(p2, [](Vec2 q) { return q.x * q.x + q.y * q.y; }) < 1e-9);
}

TEST_CASE("annulus neumann and dirichlet with two boundary circles") {
  auto g = Grid2D::create(Domain::annulus(0.5, 1.5), 48, 64);

  // p* = x1 x2: flux comp 0 (outer) = +d_r p = r sin(2 theta) cos... = 2 x1 x2 / r
  ScalarField f(g, 0.0);
  BoundaryTrace b(g);
  for (int c = 0; c < 2; ++c) {
    double sign = c == 0 ? 1.0 : -1.0;
    for (int i = 0; i < g->n2(); ++i) {
      Vec2 q = g->boundary_node(c, i);
      double r = q.norm();
      b(c, i) = sign * 2 * q.x * q.y / r;
    }
  }
  ScalarField p = solve_neumann(f, b);
  // neumann solutions are zero-mean; x1 x2 already integrates to zero on the annulus
  CHECK(sup_err(p, [](Vec2 q) { return q.x * q.y; }) < 1e-9);

  BoundaryTrace bc(g);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < g->n2(); ++i) {
      Vec2 q = g->boundary_node(c, i);
      bc(c, i) = q.x * q.y;
    }
  ScalarField pd = solve_dirichlet(f, bc);
  CHECK(sup_err(pd, [](Vec2 q) { return q.x * q.y; }) < 1e-10);

  // the log solution exercises the m=0 block with nontrivial radial profile:
  // p* = log r, lap p* = 0, d_r p* = 1/r (flux -1/r on the inner circle where n = -r^)
  BoundaryTrace blog(g);
  for (int i = 0; i < g->n2(); ++i) {
    blog(0, i) = 1.0 / 1.5;
    blog(1, i) = -1.0 / 0.5;
  }
  ScalarField f0(g, 0.0);
  ScalarField plog = solve_neumann(f0, blog);
  // compare up to the discrete mean the solver removes; the rest is genuine O(h^2) truncation
  ScalarField logr(g, [](Vec2 q) { return std::log(q.norm()); });
  double mean_log = logr.mean();
  double err = sup_err(plog, [mean_log](Vec2 q) { return std::log(q.norm()) - mean_log; });
  CHECK(err < 1e-3);
}

TEST_CASE("polar solver is exact on cubic data and high-order on rough data") {
  auto cubic = [](int n1, int n2) {
    auto g = Grid2D::create(Domain::disk(1.5), n1, n2);
    // p* = x1^2 x2 (zero mean by symmetry), lap p* = 2 x2, dp*/dn = 3 x1^2 x2 / R^... on r=R
    ScalarField f(g, [](Vec2 q) { return 2 * q.y; });
    BoundaryTrace b(g);
    for (int i = 0; i < g->n2(); ++i) {
      Vec2 q = g->boundary_node(0, i);
      b(0, i) = 3 * q.x * q.x * q.y / 1.5;  // d_r (r^3 g(theta)) = 3 r^2 g = 3 p* / r
    }
    ScalarField p = solve_neumann(f, b);
    return sup_err(p, [](Vec2 q) { return q.x * q.x * q.y; });
  };
  // the 4th-order radial rows differentiate cubics exactly
  CHECK(cubic(48, 64) < 1e-11);
  CHECK(cubic(96, 64) < 1e-11);

  // p* = sin(2 x1) sin(x2) shifted to zero mean: genuine truncation, at least 3rd order
  auto rough = [](int n1, int n2) {
    auto g = Grid2D::create(Domain::disk(1.5), n1, n2);
    auto pstar = [](Vec2 q) { return std::sin(2 * q.x) * std::sin(q.y); };
    ScalarField f(g, [&](Vec2 q) { return -5.0 * pstar(q); });
    BoundaryTrace b(g);
    for (int i = 0; i < g->n2(); ++i) {
      Vec2 q = g->boundary_node(0, i);
      Vec2 grad{2 * std::cos(2 * q.x) * std::sin(q.y), std::sin(2 * q.x) * std::cos(q.y)};
      b(0, i) = grad.dot(q) / q.norm();
    }
    ScalarField p = solve_neumann(f, b);
    ScalarField exact(g, pstar);
    const double mean = exact.mean();
    return sup_err(p, [&](Vec2 q) { return pstar(q) - mean; });
  };
  double e1 = rough(48, 64), e2 = rough(96, 64);
  CHECK(e1 < 5e-4);
  CHECK(e2 < e1 * 0.2);
}
