#include <doctest.h>

#include <cmath>

#include "aht/combinatorics.hpp"
#include "aht/evaluate.hpp"
#include "aht/kato.hpp"
#include "aht/operators.hpp"
#include "aht/presets.hpp"
#include "aht/report.hpp"

using namespace aht;

TEST_CASE("torus ladder: spectral reconstruction leaves no residual") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 64, 64);
  VectorField y = random_vector(g, {11, 0.8, 0.7, 5});
  KatoDerivatives kd = kato_ladder(y, 5);

  CHECK(kd.order() == 5);
  REQUIRE(kd.Du.size() == 6);
  REQUIRE(kd.levels.size() == 5);
  CHECK(kd.y_norm == doctest::Approx(norm_surrogate(y)));

  double prev = 0;
  for (const auto& l : kd.levels) {
    const double scale = 1.0 + l.norm;
    CHECK(l.div_res < 1e-9 * scale);
    CHECK(l.curl_res < 1e-9 * scale);
    CHECK(l.bc_res == 0.0);
    CHECK(l.circ_res < 1e-9 * scale);
    // the continuum data has zero mean; the recorded projection is discretization noise
    CHECK(std::abs(l.div_shift) < 1e-10 * scale);
    CHECK(std::abs(l.curl_shift) < 1e-10 * scale);
    CHECK(l.norm > prev);  // factorial growth
    prev = l.norm;
  }
  // the base of the ladder is the projection itself, which is divergence-free
  CHECK(divergence(kd.Du[0]).sup_abs() < 1e-9 * (1.0 + norm_surrogate(kd.Du[0])));
}

TEST_CASE("two independent routes to the first material derivative agree") {
  // torus: both routes are spectral, agreement is at roundoff
  auto gt = Grid2D::create(Domain::torus(2 * M_PI), 64, 64);
  VectorField yt = random_vector(gt, {11, 0.8, 0.7, 5});
  KatoDerivatives kt = kato_ladder(yt, 1);
  VectorField direct = material_derivative_direct(yt);
  CHECK((kt.Du[1] - direct).sup_abs() < 1e-10 * kt.levels[0].norm);

  // the vorticity identity holds for the direct route as well
  EvalContext ctx(kt.y, kt.Du);
  ScalarField cs = evaluate(vorticity_series(1), ctx);
  ScalarField cd = curl(direct);
  double worst = 0;
  for (int n = 0; n < cs.size(); ++n) worst = std::max(worst, std::abs(cs[n] - cd[n]));
  CHECK(worst < 1e-10 * kt.levels[0].norm);

  // disk and annulus: independent discretizations agree at truncation level
  auto gd = Grid2D::create(Domain::disk(1.5), 48, 96);
  VectorField yd = random_vector(gd, {12, 0.8, 0.7, 4});
  KatoDerivatives kdd = kato_ladder(yd, 1);
  VectorField dd = material_derivative_direct(yd);
  CHECK((kdd.Du[1] - dd).sup_abs() < 5e-3 * (1.0 + kdd.levels[0].norm));

  auto ga = Grid2D::create(Domain::annulus(0.75, 1.75), 48, 96);
  VectorField ya = random_vector(ga, {13, 0.8, 0.7, 4});
  KatoDerivatives kda = kato_ladder(ya, 1);
  VectorField da = material_derivative_direct(ya);
  CHECK((kda.Du[1] - da).sup_abs() < 2e-2 * (1.0 + kda.levels[0].norm));

  // the annulus circulation constraint is active and satisfied
  CHECK(kda.levels[0].circ_res < 1e-9 * (1.0 + kda.levels[0].norm));
}

TEST_CASE("polar ladders reconstruct through third order with recorded projections") {
  auto gd = Grid2D::create(Domain::disk(1.5), 48, 96);
  VectorField yd = random_vector(gd, {12, 0.8, 0.7, 4});
  KatoDerivatives kd = kato_ladder(yd, 3);
  REQUIRE(kd.levels.size() == 3);
  for (const auto& l : kd.levels) {
    const double scale = 1.0 + l.norm;
    // honest truncation-level residuals, small relative to each rung
    CHECK(l.div_res < 5e-2 * scale);
    CHECK(l.curl_res < 5e-2 * scale);
    CHECK(l.bc_res < 5e-2 * scale);
    // the compatibility projection the data needed before solving
    CHECK(std::abs(l.div_shift) < 1e-2 * scale);
    CHECK(l.norm > 0.0);
  }
}

TEST_CASE("trajectory finite differences confirm the ladder pointwise") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 64, 64);
  VectorField y = random_vector(g, {21, 0.6, 0.7, 5});
  KatoDerivatives kd = kato_ladder(y, 2);
  std::vector<Vec2> seeds{{0.5, 1.2}, {3.3, 2.8}, {5.1, 0.4}};

  for (int k = 1; k <= 2; ++k) {
    std::vector<FdSample> fs = fd_oracle(y, seeds, k);
    REQUIRE(fs.size() == seeds.size());
    double worst = 0;
    for (const auto& s : fs) {
      const Vec2 lv = eval_at(kd.Du[k], s.x0);
      const double num = std::hypot(s.value.x - lv.x, s.value.y - lv.y);
      const double den = std::hypot(lv.x, lv.y) + 1e-12;
      worst = std::max(worst, num / den);
      // the sample respects its own acceptance contract
      const double mag = std::hypot(s.value.x, s.value.y);
      CHECK(s.noise <= 0.02 * mag + 1e-10 + 1e-15);
      CHECK(s.h_used > 0.0);
    }
    CHECK(worst < (k == 1 ? 1e-3 : 5e-3));
  }
}

TEST_CASE("degenerate ladders: zero data and steady states") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 48, 48);

  VectorField zero(g);
  KatoDerivatives kz = kato_ladder(zero, 3);
  CHECK(kz.y_norm == 0.0);
  for (const auto& l : kz.levels) CHECK(l.norm == 0.0);
  for (const auto& d : kz.Du) CHECK(d.sup_abs() == 0.0);

  InitialSpec spec;
  spec.preset = "gradient_steady";
  spec.seed = 3;
  VectorField yg = make_initial(g, spec);
  KatoDerivatives kg = kato_ladder(yg, 3);
  CHECK(kg.Du[0].sup_abs() < 1e-11);
  // every material derivative of a fixed point vanishes; the ladder returns pure
  // cancellation noise far below the data scale
  for (const auto& l : kg.levels) CHECK(l.norm < 1e-8);
}

TEST_CASE("ladder and oracle argument gates") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 32, 32);
  VectorField y = random_vector(g, {2, 0.5, 0.7, 3});
  CHECK_THROWS_AS(kato_ladder(y, 0), Error);
  CHECK_THROWS_AS(kato_ladder(y, kMaxSeriesOrder + 1), Error);
  std::vector<Vec2> seeds{{1.0, 1.0}};
  CHECK_THROWS_AS(fd_oracle(y, seeds, 0), Error);
  CHECK_THROWS_AS(fd_oracle(y, seeds, 5), Error);
}

TEST_CASE("ladder norms sit under the certified factorial budget") {
  auto g = Grid2D::create(Domain::torus(2 * M_PI), 64, 64);
  VectorField y = random_vector(g, {21, 0.6, 0.7, 5});
  KatoDerivatives kd = kato_ladder(y, 4);

  DomainConstants c;
  c.c_rho = 1.0;
  c.C_Gamma = std::sqrt(2.0);
  c.C_Omega = estimate_projection_constant(g, 8, 7);
  c.c_r = estimate_regularity_constant(g, 8, 7);
  const double L = find_admissible_L(c);
  CHECK(gamma_value(L, c) <= 1.0 / c.c_r);

  double kfac = 1.0;
  for (const auto& l : kd.levels) {
    kfac *= l.k;
    const double budget = c.C_Omega * kfac * std::pow(c.C_Omega * L, l.k) *
                          std::pow(kd.y_norm, l.k + 1) / ((l.k + 1.0) * (l.k + 1.0));
    CHECK(l.norm <= budget);
  }
}
