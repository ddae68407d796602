#include <doctest.h>

#include <cmath>

#include "aht/flowmap.hpp"
#include "aht/operators.hpp"
#include "aht/presets.hpp"
#include "aht/report.hpp"

using namespace aht;

TEST_CASE("snapshot interpolation reproduces the snapshots and zero fields stand still") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 48, 48);
  VectorField y = random_vector(g, {21, 0.6, 0.7, 5});
  RunOptions ro;
  ro.T = 0.5;
  ro.sample_every = 0.1;
  ro.with_drift = false;
  RunResult rr = run(make_state(y), ro);
  SnapshotSeries ss = SnapshotSeries::from_run(rr);
  CHECK(ss.t_min() == 0.0);
  CHECK(ss.t_max() == doctest::Approx(0.5));
  CHECK(ss.count() == static_cast<int>(rr.snapshots.size()));
  CHECK(ss.max_spacing() == doctest::Approx(0.1).epsilon(1e-9));

  // Lagrange interpolation is exact at the knots
  const Vec2 probe{2.2, 3.9};
  for (const auto& s : rr.snapshots) {
    Vec2 vi = ss.velocity(s.t, probe);
    Vec2 ve = eval_at(s.u, probe);
    CHECK(std::hypot(vi.x - ve.x, vi.y - ve.y) < 1e-13);
  }

  // a zero series transports nothing
  std::vector<double> ts{0.0, 0.5, 1.0};
  std::vector<VectorField> us{VectorField(g), VectorField(g), VectorField(g)};
  SnapshotSeries zs(ts, us);
  CHECK(zs.max_speed() == 0.0);
  Trajectory tz = integrate_trajectory(zs, probe, 1.0);
  CHECK(tz.end().x == probe.x);
  CHECK(tz.end().y == probe.y);

  // T = 0 is the seed itself
  Trajectory t0 = integrate_trajectory(ss, probe, 0.0);
  CHECK(t0.x.size() == 1);
  CHECK(t0.x[0].x == probe.x);

  // seeds must start inside the domain
  auto gd = Grid2D::create(Domain::disk(1.0), 16, 32);
  std::vector<VectorField> ud{VectorField(gd), VectorField(gd)};
  SnapshotSeries sd({0.0, 1.0}, ud);
  CHECK_THROWS_AS(integrate_trajectory(sd, Vec2{2.0, 0.0}, 1.0), Error);
}

TEST_CASE("relaxing rotation: trajectories follow the closed-form swept angle") {
  auto g = Grid2D::create(Domain::disk(1.5), 48, 96);
  InitialSpec spec;
  spec.preset = "rotation";
  spec.theta = 0.4;
  RunOptions ro;
  ro.T = 1.5;
  ro.sample_every = 0.025;
  ro.with_drift = false;
  RunResult rr = run(make_state(make_initial(g, spec)), ro);
  SnapshotSeries ss = SnapshotSeries::from_run(rr);

  const Vec2 x0{0.9, 0.2};
  Trajectory tr = integrate_trajectory(ss, x0, 1.5);
  CHECK(tr.clamp_events == 0);

  // the velocity stays tangential, so the radius is invariant...
  const double r0 = std::hypot(x0.x, x0.y);
  for (const auto& x : tr.x) CHECK(std::abs(std::hypot(x.x, x.y) - r0) < 1e-9);

  // ...and the swept angle is theta(0) - theta(T) for tan(theta/2) = tan(theta0/2) e^{-t}
  const double aT = 2.0 * std::atan(std::tan(0.2) * std::exp(-1.5));
  const double phi = std::atan2(x0.y, x0.x) + (0.4 - aT);
  const Vec2 xe{r0 * std::cos(phi), r0 * std::sin(phi)};
  CHECK(std::hypot(tr.end().x - xe.x, tr.end().y - xe.y) < 1e-7);
}

TEST_CASE("trajectory integrator converges at fourth order in the step") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 64, 64);
  VectorField y = random_vector(g, {21, 0.6, 0.7, 5});
  RunOptions ro;
  ro.T = 1.0;
  ro.sample_every = 0.25;  // steps below divide the knot spacing exactly
  ro.with_drift = false;
  RunResult rr = run(make_state(y), ro);
  SnapshotSeries ss = SnapshotSeries::from_run(rr);

  const Vec2 z0{1.1, 2.3};
  const Vec2 ref = integrate_trajectory(ss, z0, 1.0).end();
  const Vec2 a1 = integrate_trajectory(ss, z0, 1.0, 0.25).end();
  const Vec2 a2 = integrate_trajectory(ss, z0, 1.0, 0.125).end();
  const Vec2 a3 = integrate_trajectory(ss, z0, 1.0, 0.0625).end();
  const double e1 = std::hypot(a1.x - ref.x, a1.y - ref.y);
  const double e2 = std::hypot(a2.x - ref.x, a2.y - ref.y);
  const double e3 = std::hypot(a3.x - ref.x, a3.y - ref.y);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 > 8.0);
  CHECK(e2 / e3 > 8.0);
}

TEST_CASE("time-Taylor flow: anchor values, term decay, and agreement with integration") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 64, 64);
  VectorField y = random_vector(g, {21, 0.6, 0.7, 5});
  KatoDerivatives kd = kato_ladder(y, 5);

  const Vec2 x0{0.7, 4.1};
  // t = 0 collapses to the seed
  Vec2 p0 = taylor_flow(kd, x0, 0.0, 5);
  CHECK(p0.x == x0.x);
  CHECK(p0.y == x0.y);

  // K = 0 is the Euler displacement along u(0, x0)
  const double tstar = 0.1 / kd.y_norm;
  Vec2 u0 = eval_at(kd.Du[0], x0);
  Vec2 e0 = taylor_flow(kd, x0, tstar, 0);
  CHECK(e0.x == doctest::Approx(x0.x + tstar * u0.x).epsilon(1e-14));
  CHECK(e0.y == doctest::Approx(x0.y + tstar * u0.y).epsilon(1e-14));

  // orders past the ladder are an error
  CHECK_THROWS_AS(taylor_flow(kd, x0, tstar, kd.order() + 1), Error);

  // successive corrections shrink geometrically inside the disk of analyticity
  Vec2 prev = e0;
  double last_term = 0;
  for (int K = 1; K <= 5; ++K) {
    Vec2 cur = taylor_flow(kd, x0, tstar, K);
    const double term = std::hypot(cur.x - prev.x, cur.y - prev.y);
    if (K >= 2 && last_term > 1e-12) CHECK(term < 0.1 * last_term);
    last_term = term;
    prev = cur;
  }

  // the summed series lands on the integrated trajectory
  RunOptions ro;
  ro.T = tstar;
  ro.sample_every = tstar / 8;
  ro.with_drift = false;
  RunResult rr = run(make_state(y), ro);
  SnapshotSeries ss = SnapshotSeries::from_run(rr);
  Vec2 ode = integrate_trajectory(ss, x0, tstar).end();
  Vec2 tay = taylor_flow(kd, x0, tstar, 5);
  CHECK(std::hypot(tay.x - ode.x, tay.y - ode.y) < 1e-8);
}

TEST_CASE("radius estimate: certified bound is respected and scales exactly") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 64, 64);
  VectorField y = random_vector(g, {21, 0.6, 0.7, 5});
  KatoDerivatives kd = kato_ladder(y, 5);

  DomainConstants c;
  c.c_rho = 1.0;
  c.C_Gamma = std::sqrt(2.0);
  c.C_Omega = estimate_projection_constant(g, 8, 7);
  const double L = find_admissible_L(c);

  RadiusEstimate re = radius_estimate(kd, L, c);
  CHECK(re.points_used >= 3);
  CHECK(re.empirical > 0.0);
  CHECK(re.bound == doctest::Approx(1.0 / (c.C_Omega * L * kd.y_norm)).epsilon(1e-12));
  // the certified radius must under-estimate the observed one
  CHECK(re.empirical > re.bound);
  // the fit slope is the log of the inverse radius
  CHECK(re.empirical == doctest::Approx(std::exp(-re.slope)).epsilon(1e-12));

  // the ladder is (k+1)-homogeneous in y, so doubling y halves both radii exactly
  KatoDerivatives kd2 = kato_ladder(y * 2.0, 5);
  RadiusEstimate re2 = radius_estimate(kd2, L, c);
  CHECK(re2.empirical / re.empirical == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(re2.bound / re.bound == doctest::Approx(0.5).epsilon(1e-12));

  // four ladder rungs are the minimum for a fit
  KatoDerivatives k3 = kato_ladder(y, 3);
  CHECK_THROWS_AS(radius_estimate(k3, L, c), Error);
}
