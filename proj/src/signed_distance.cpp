#include "aht/signed_distance.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>

namespace aht {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// sparse exact polynomial in (x1, x2)
struct XPoly {
  std::map<std::pair<int, int>, BigInt> c;

  void add(int d1, int d2, const BigInt& v) {
    auto key = std::make_pair(d1, d2);
    auto it = c.find(key);
    if (it == c.end())
      c.emplace(key, v);
    else {
      it->second += v;
      if (it->second == 0) c.erase(it);
    }
  }
  XPoly dx(int dir) const {
    XPoly r;
    for (const auto& [k, v] : c) {
      int d1 = k.first, d2 = k.second;
      if (dir == 0 && d1 > 0) r.add(d1 - 1, d2, v * d1);
      if (dir == 1 && d2 > 0) r.add(d1, d2 - 1, v * d2);
    }
    return r;
  }
  XPoly mul_r2() const {  // * (x1^2 + x2^2)
    XPoly r;
    for (const auto& [k, v] : c) {
      r.add(k.first + 2, k.second, v);
      r.add(k.first, k.second + 2, v);
    }
    return r;
  }
  XPoly mul_x(int dir, const BigInt& s) const {
    XPoly r;
    for (const auto& [k, v] : c) r.add(k.first + (dir == 0), k.second + (dir == 1), v * s);
    return r;
  }
  XPoly sub(const XPoly& o) const {
    XPoly r = *this;
    for (const auto& [k, v] : o.c) r.add(k.first, k.second, -v);
    return r;
  }
};

// d/dx_dir (P / r^q) = (r^2 dP - q x_dir P) / r^(q+2)
XPoly differentiate_over_r(const XPoly& p, int q, int dir) {
  return p.dx(dir).mul_r2().sub(p.mul_x(dir, q));
}

}  // namespace

double SignedDistance::Poly::eval(double x1, double x2) const {
  // Horner over d1 rows
  double s = 0;
  for (int d1 = deg; d1 >= 0; --d1) {
    double row = 0;
    for (int d2 = deg; d2 >= 0; --d2) row = row * x2 + c[d1 * (deg + 1) + d2];
    s = s * x1 + row;
  }
  return s;
}

SignedDistance::SignedDistance(const Domain& dom, int s_max) : dom_(dom), s_max_(s_max) {
  require(s_max >= 1 && s_max <= 12, ErrorCode::InvalidArgument, "s_max out of range");
  if (!dom.has_boundary()) {
    // no boundary, no collar terms anywhere: the growth constant degenerates to 1
    width_ = 0;
    c_rho_ = 1.0;
    sup_.assign(s_max_ + 1, 0.0);
    return;
  }
  width_ = 0.5 * dom.inradius();
  sup_.assign(s_max_ + 1, 0.0);

  // Exact derivative tensors of g(x) = |x|: T_s(m) = P_{s,m}(x) / r^(2s-1).
  // T_{s+1}(m) = d_1 T_s(m) for m <= s, and T_{s+1}(s+1) = d_2 T_s(s).
  std::vector<std::vector<XPoly>> tab(s_max_ + 1);
  tab[1].resize(2);
  tab[1][0].add(1, 0, 1);  // x1 / r
  tab[1][1].add(0, 1, 1);  // x2 / r
  for (int s = 1; s < s_max_; ++s) {
    int q = 2 * s - 1;
    tab[s + 1].resize(s + 2);
    for (int m = 0; m <= s; ++m) tab[s + 1][m] = differentiate_over_r(tab[s][m], q, 0);
    tab[s + 1][s + 1] = differentiate_over_r(tab[s][s], q, 1);
  }

  poly_.resize(s_max_ + 1);
  for (int s = 1; s <= s_max_; ++s) {
    poly_[s].resize(s + 1);
    for (int m = 0; m <= s; ++m) {
      int deg = 0;
      for (const auto& [k, v] : tab[s][m].c) deg = std::max({deg, k.first, k.second});
      Poly p;
      p.deg = deg;
      p.c.assign((deg + 1) * (deg + 1), 0.0);
      for (const auto& [k, v] : tab[s][m].c)
        p.c[k.first * (deg + 1) + k.second] = static_cast<double>(v);
      poly_[s][m] = std::move(p);
    }
  }

  // Fit c_rho by dense collar sampling. Components scale like r^(1-s) so the inner edge of
  // each collar band dominates; sampling stays dense anyway to keep this assumption-free.
  auto scan_band = [&](double r_lo, double r_hi) {
    const int nr = 96, nth = 96;
    for (int a = 0; a <= nr; ++a) {
      double r = r_lo + (r_hi - r_lo) * a / nr;
      for (int b = 0; b < nth; ++b) {
        double th = 2 * M_PI * b / nth;
        Vec2 x{r * std::cos(th), r * std::sin(th)};
        for (int s = 1; s <= s_max_; ++s) {
          auto t = eval_radial_tensor(x, s);
          for (double v : t) sup_[s] = std::max(sup_[s], std::abs(v));
        }
      }
    }
  };
  if (dom.kind == DomainKind::Disk) {
    scan_band(dom.radius - width_, dom.radius + width_);
  } else {
    scan_band(dom.r_inner - width_, dom.r_inner + width_);
    scan_band(dom.r_outer - width_, dom.r_outer + width_);
  }
  double c = 1.0;
  double fact = 1.0;
  for (int s = 1; s <= s_max_; ++s) {
    fact *= s;
    c = std::max(c, std::pow(sup_[s] / fact, 1.0 / s));
  }
  c_rho_ = std::max(c, 1.0 + 1e-12);
}

double SignedDistance::value(Vec2 x) const {
  require(dom_.has_boundary(), ErrorCode::NoBoundary, "no boundary, no distance to it");
  double r = x.norm();
  if (dom_.kind == DomainKind::Disk) return r - dom_.radius;
  return std::max(r - dom_.r_outer, dom_.r_inner - r);
}

bool SignedDistance::in_collar(Vec2 x) const {
  if (!dom_.has_boundary()) return false;
  return std::abs(value(x)) < width_ * (1 + 1e-9);
}

std::vector<double> SignedDistance::eval_radial_tensor(Vec2 x, int s) const {
  double r = x.norm();
  double rq = std::pow(r, 2 * s - 1);
  std::vector<double> t(s + 1);
  for (int m = 0; m <= s; ++m) t[m] = poly_[s][m].eval(x.x, x.y) / rq;
  return t;
}

std::vector<double> SignedDistance::tensor(Vec2 x, int s) const {
  require(s >= 1 && s <= s_max_, ErrorCode::OrderTooLarge, "tensor order beyond s_max");
  require(in_collar(x), ErrorCode::OutOfCollar, "signed-distance derivatives need a collar point");
  auto t = eval_radial_tensor(x, s);
  if (dom_.kind == DomainKind::Annulus) {
    // nearest boundary circle decides the branch: rho = r - r_outer or r_inner - r
    double r = x.norm();
    bool inner = (r - dom_.r_inner) < (dom_.r_outer - r);
    if (inner)
      for (double& v : t) v = -v;
  }
  return t;
}

double SignedDistance::contract(std::vector<double> tensor, const std::vector<Vec2>& slots) {
  int s = (int)tensor.size() - 1;
  require((int)slots.size() == s, ErrorCode::InvalidArgument, "tensor/slot arity mismatch");
  // peel one slot at a time: S(m) = T(m) v.x + T(m+1) v.y
  for (int step = 0; step < s; ++step) {
    const Vec2& v = slots[step];
    for (int m = 0; m + 1 < (int)tensor.size(); ++m)
      tensor[m] = tensor[m] * v.x + tensor[m + 1] * v.y;
    tensor.pop_back();
  }
  return tensor[0];
}

}  // namespace aht
