#include <doctest.h>

#include <cmath>

#include "aht/signed_distance.hpp"

using namespace aht;

TEST_CASE("signed distance values and collar membership") {
  SignedDistance sd(Domain::disk(1.0));
  CHECK(sd.value({0.5, 0.0}) == doctest::Approx(-0.5));
  CHECK(sd.value({0.0, 1.2}) == doctest::Approx(0.2));
  CHECK(sd.collar_width() == doctest::Approx(0.5));
  CHECK(sd.in_collar({0.9, 0.0}));
  CHECK(!sd.in_collar({0.2, 0.1}));

  SignedDistance sa(Domain::annulus(0.5, 1.5));
  CHECK(sa.value({1.0, 0.0}) == doctest::Approx(-0.5));
  CHECK(sa.value({0.4, 0.0}) == doctest::Approx(0.1));   // inside the hole: outside the domain
  CHECK(sa.value({1.6, 0.0}) == doctest::Approx(0.1));
  CHECK(sa.in_collar({1.4, 0.0}));
  CHECK(sa.in_collar({0.6, 0.0}));
  CHECK(!sa.in_collar({1.0, 0.0}));  // mid-annulus sits outside both collars
}

TEST_CASE("first and second derivative tensors match closed forms") {
  SignedDistance sd(Domain::disk(1.0));
  Vec2 x{0.7, 0.45};
  double r = x.norm();
  REQUIRE(sd.in_collar(x));

  auto t1 = sd.tensor(x, 1);
  REQUIRE(t1.size() == 2);
  CHECK(t1[0] == doctest::Approx(x.x / r).epsilon(1e-13));
  CHECK(t1[1] == doctest::Approx(x.y / r).epsilon(1e-13));

  auto t2 = sd.tensor(x, 2);
  REQUIRE(t2.size() == 3);
  // grad^2 |x| = (I - x x^T/r^2)/r, components (11), (12), (22)
  CHECK(t2[0] == doctest::Approx((1 - x.x * x.x / (r * r)) / r).epsilon(1e-12));
  CHECK(t2[1] == doctest::Approx((-x.x * x.y / (r * r)) / r).epsilon(1e-12));
  CHECK(t2[2] == doctest::Approx((1 - x.y * x.y / (r * r)) / r).epsilon(1e-12));
}

TEST_CASE("annulus inner-collar tensors flip sign with the distance branch") {
  SignedDistance sa(Domain::annulus(0.5, 1.5));
  Vec2 x{0.6, 0.05};  // inner collar: rho = r_in - r, so grad rho = -x/r
  double r = x.norm();
  auto t1 = sa.tensor(x, 1);
  CHECK(t1[0] == doctest::Approx(-x.x / r).epsilon(1e-13));
  CHECK(t1[1] == doctest::Approx(-x.y / r).epsilon(1e-13));
}

TEST_CASE("tensor order s+1 is the directional derivative of order s") {
  SignedDistance sd(Domain::disk(1.0));
  const Vec2 x{0.8, 0.3};
  const Vec2 slot{0.5, 0.25};
  const double h = 1e-6;
  for (int s = 1; s <= 6; ++s) {
    std::vector<Vec2> slots_s(s, slot);
    for (Vec2 e : {Vec2{1, 0}, Vec2{0, 1}}) {
      double fp = SignedDistance::contract(sd.tensor(x + h * e, s), slots_s);
      double fm = SignedDistance::contract(sd.tensor(x - h * e, s), slots_s);
      std::vector<Vec2> slots_s1 = slots_s;
      slots_s1.push_back(e);
      double want = SignedDistance::contract(sd.tensor(x, s + 1), slots_s1);
      CHECK((fp - fm) / (2 * h) == doctest::Approx(want).epsilon(1e-5));
    }
  }
}

TEST_CASE("contract is symmetric under slot permutations") {
  SignedDistance sd(Domain::disk(1.0));
  Vec2 x{0.75, -0.4};
  auto t3 = sd.tensor(x, 3);
  std::vector<Vec2> p1 = {{1, 2}, {3, -1}, {0.5, 0.5}};
  std::vector<Vec2> p2 = {{3, -1}, {0.5, 0.5}, {1, 2}};
  CHECK(SignedDistance::contract(t3, p1) == doctest::Approx(SignedDistance::contract(t3, p2)).epsilon(1e-13));
}

TEST_CASE("derivative growth constant: value, bounds, and the flat torus") {
  SignedDistance unit(Domain::disk(1.0));
  // on the collar r >= 1/2 each |grad^s rho| component is at most (s-1)! 2^(s-1), so the
  // fitted c never exceeds 2; it is at least 1 by construction
  CHECK(unit.c_rho() >= 1.0);
  CHECK(unit.c_rho() <= 2.0);
  for (int s = 1; s <= unit.s_max(); ++s) {
    double fact = 1;
    for (int i = 2; i <= s; ++i) fact *= i;
    CHECK(unit.tensor_sup(s) <= std::pow(unit.c_rho(), s) * fact * (1 + 1e-9));
  }

  SignedDistance flat(Domain::torus(2 * M_PI));
  CHECK(flat.c_rho() == doctest::Approx(1.0));

  // scaling: a bigger disk has a gentler boundary, the constant shrinks toward 1
  SignedDistance big(Domain::disk(4.0));
  CHECK(big.c_rho() < unit.c_rho());
}
