#pragma once
#include <vector>

#include "aht/geometry.hpp"

namespace aht {

// Signed distance rho to the domain boundary (negative inside) together with its derivative
// tensors on the boundary collar. For circles rho is radial, so every component of
// grad^s |x| is an integer-coefficient polynomial over r^(2s-1); the tensors here are built
// once by exact polynomial differentiation and evaluated in double precision.
//
// A symmetric s-tensor in 2D is stored as s+1 numbers: comp[m] = component with m indices
// equal to 2 (the rest equal to 1).
class SignedDistance {
 public:
  explicit SignedDistance(const Domain& dom, int s_max = 9);

  const Domain& domain() const { return dom_; }
  int s_max() const { return s_max_; }
  double collar_width() const { return width_; }  // half the inradius
  double value(Vec2 x) const;                     // signed distance, negative inside
  bool in_collar(Vec2 x) const;

  // grad^s rho at x (s >= 1); requires x in the collar
  std::vector<double> tensor(Vec2 x, int s) const;
  // contract a symmetric tensor with s vectors
  static double contract(std::vector<double> tensor, const std::vector<Vec2>& slots);

  // smallest c >= 1 with max_collar |grad^s rho| <= c^s s! for all s <= s_max (sup over
  // components, fitted by dense collar sampling); the torus has no boundary and reports 1.
  double c_rho() const { return c_rho_; }
  double tensor_sup(int s) const { return sup_[s]; }

 private:
  Domain dom_;
  int s_max_;
  double width_;
  double c_rho_ = 1.0;
  std::vector<double> sup_;  // per order s, max |component| over the collar
  // polynomial tables, poly_[s][m] evaluated as P(x)/r^(2s-1)
  struct Poly {
    // dense coefficient grid c[d1][d2], degrees <= deg
    int deg = 0;
    std::vector<double> c;
    double eval(double x1, double x2) const;
  };
  std::vector<std::vector<Poly>> poly_;
  std::vector<double> eval_radial_tensor(Vec2 x, int s) const;  // grad^s |x|
};

}  // namespace aht
