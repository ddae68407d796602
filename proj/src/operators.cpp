#include "aht/operators.hpp"

#include <array>
#include <cmath>

#include "aht/fft.hpp"

namespace aht {

namespace {

// ---- torus spectral partials --------------------------------------------------------------
void torus_partials(const ScalarField& f, ScalarField* d1, ScalarField* d2) {
  const auto& sp = TorusSpectral::get(f.grid());
  std::vector<std::complex<double>> F, G;
  sp.forward(f, F);
  const std::complex<double> I(0, 1);
  if (d1) {
    G.resize(F.size());
    for (int i = 0; i < sp.n1(); ++i)
      for (int j = 0; j < sp.nc(); ++j) G[sp.cindex(i, j)] = I * sp.k1_deriv(i) * F[sp.cindex(i, j)];
    sp.backward(G, *d1);
  }
  if (d2) {
    G.resize(F.size());
    for (int i = 0; i < sp.n1(); ++i)
      for (int j = 0; j < sp.nc(); ++j) G[sp.cindex(i, j)] = I * sp.k2_deriv(j) * F[sp.cindex(i, j)];
    sp.backward(G, *d2);
  }
}

// ---- polar partials -----------------------------------------------------------------------
// radial derivative, 4th order; disk stencils cross the origin by parity
ScalarField radial_derivative(const ScalarField& f) {
  const auto& g = f.grid();
  int n1 = g->n1(), n2 = g->n2(), half = n2 / 2;
  double h = g->h1();
  ScalarField out(g);
  bool disk = g->kind() == DomainKind::Disk;

  auto value = [&](int j, int i) {
    if (j >= 0) return f(j, i);
    return f(-1 - j, (i + half) % n2);  // ghost ring at radius -r_{-1-j}
  };

  static const double c_center[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  static const double c_m3[5] = {-1.0 / 12, 6.0 / 12, -18.0 / 12, 10.0 / 12, 3.0 / 12};
  static const double c_m4[5] = {3.0 / 12, -16.0 / 12, 36.0 / 12, -48.0 / 12, 25.0 / 12};
  static const double c_p0[5] = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
  static const double c_p1[5] = {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12};

  for (int j = 0; j < n1; ++j) {
    const double* w;
    int j0;
    if (j >= n1 - 2 && n1 >= 5) {
      if (j == n1 - 1) { w = c_m4; j0 = j - 4; }
      else             { w = c_m3; j0 = j - 3; }
    } else if (!disk && j <= 1) {
      if (j == 0) { w = c_p0; j0 = 0; }
      else        { w = c_p1; j0 = 0; }
    } else {
      w = c_center; j0 = j - 2;
    }
    for (int i = 0; i < n2; ++i) {
      double s = 0;
      for (int t = 0; t < 5; ++t) s += w[t] * value(j0 + t, i);
      out(j, i) = s / h;
    }
  }
  return out;
}

ScalarField angular_derivative(const ScalarField& f) {
  const auto& sp = AngularSpectral::get(f.grid());
  const auto& g = f.grid();
  int n1 = g->n1(), n2 = g->n2(), nm = sp.nm();
  ScalarField out(g);
  std::vector<std::complex<double>> row(nm);
  const std::complex<double> I(0, 1);
  for (int j = 0; j < n1; ++j) {
    sp.forward_ring(f.data() + (size_t)j * n2, row.data());
    for (int m = 0; m < nm; ++m) row[m] *= I * double(m == n2 / 2 ? 0 : m);
    sp.backward_ring(row.data(), out.data() + (size_t)j * n2);
  }
  return out;
}

void polar_partials(const ScalarField& f, ScalarField* d1, ScalarField* d2) {
  const auto& g = f.grid();
  ScalarField fr = radial_derivative(f);
  ScalarField ft = angular_derivative(f);
  int n1 = g->n1(), n2 = g->n2();
  if (d1) *d1 = ScalarField(g);
  if (d2) *d2 = ScalarField(g);
  for (int j = 0; j < n1; ++j) {
    double r = g->radius(j);
    for (int i = 0; i < n2; ++i) {
      double th = g->theta(i), c = std::cos(th), s = std::sin(th);
      double dr = fr(j, i), dt = ft(j, i) / r;
      if (d1) (*d1)(j, i) = c * dr - s * dt;
      if (d2) (*d2)(j, i) = s * dr + c * dt;
    }
  }
}

void partials(const ScalarField& f, ScalarField* d1, ScalarField* d2) {
  if (f.grid()->is_polar())
    polar_partials(f, d1, d2);
  else
    torus_partials(f, d1, d2);
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  ScalarField d1, d2;
  partials(f, &d1, &d2);
  return VectorField(std::move(d1), std::move(d2));
}

ScalarField divergence(const VectorField& v) {
  ScalarField d1, d2;
  partials(v.comp(0), &d1, nullptr);
  partials(v.comp(1), nullptr, &d2);
  d1 += d2;
  return d1;
}

ScalarField curl(const VectorField& v) {
  ScalarField d1v2, d2v1;
  partials(v.comp(1), &d1v2, nullptr);
  partials(v.comp(0), nullptr, &d2v1);
  d1v2 -= d2v1;
  return d1v2;
}

JacobianField jacobian(const VectorField& v) {
  JacobianField J;
  partials(v.comp(0), &J.m[0][0], &J.m[0][1]);
  partials(v.comp(1), &J.m[1][0], &J.m[1][1]);
  return J;
}

JacobianField matmul(const JacobianField& a, const JacobianField& b) {
  check_same_grid(a.grid(), b.grid(), "matmul");
  JacobianField r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ScalarField s(a.grid());
      for (int n = 0; n < s.size(); ++n)
        s[n] = a.m[i][0][n] * b.m[0][j][n] + a.m[i][1][n] * b.m[1][j][n];
      r.m[i][j] = std::move(s);
    }
  return r;
}

ScalarField trace(const JacobianField& a) {
  ScalarField s(a.grid());
  for (int n = 0; n < s.size(); ++n) s[n] = a.m[0][0][n] + a.m[1][1][n];
  return s;
}

ScalarField asym(const JacobianField& a) {
  ScalarField s(a.grid());
  for (int n = 0; n < s.size(); ++n) s[n] = a.m[1][0][n] - a.m[0][1][n];
  return s;
}

VectorField apply(const JacobianField& a, const VectorField& v) {
  check_same_grid(a.grid(), v.grid(), "apply");
  VectorField r(v.grid());
  for (int n = 0; n < v.comp(0).size(); ++n) {
    r.comp(0)[n] = a.m[0][0][n] * v.comp(0)[n] + a.m[0][1][n] * v.comp(1)[n];
    r.comp(1)[n] = a.m[1][0][n] * v.comp(0)[n] + a.m[1][1][n] * v.comp(1)[n];
  }
  return r;
}

VectorField apply_transpose(const JacobianField& a, const VectorField& v) {
  check_same_grid(a.grid(), v.grid(), "apply_transpose");
  VectorField r(v.grid());
  for (int n = 0; n < v.comp(0).size(); ++n) {
    r.comp(0)[n] = a.m[0][0][n] * v.comp(0)[n] + a.m[1][0][n] * v.comp(1)[n];
    r.comp(1)[n] = a.m[0][1][n] * v.comp(0)[n] + a.m[1][1][n] * v.comp(1)[n];
  }
  return r;
}

VectorField advect(const VectorField& u, const JacobianField& grad_y) { return apply(grad_y, u); }

BoundaryTrace normal_trace(const VectorField& v) {
  const auto& g = v.grid();
  BoundaryTrace b(g);
  for (int c = 0; c < g->boundary_components(); ++c) {
    int ring = g->boundary_ring(c);
    for (int i = 0; i < g->n2(); ++i) {
      Vec2 n = g->boundary_normal(c, i);
      b(c, i) = v.at(ring, i).dot(n);
    }
  }
  return b;
}

BoundaryTrace boundary_restrict(const ScalarField& f) {
  const auto& g = f.grid();
  BoundaryTrace b(g);
  for (int c = 0; c < g->boundary_components(); ++c) {
    int ring = g->boundary_ring(c);
    for (int i = 0; i < g->n2(); ++i) b(c, i) = f(ring, i);
  }
  return b;
}

BoundaryTrace tangential_derivative(const BoundaryTrace& b) {
  const auto& g = b.grid();
  const auto& sp = AngularSpectral::get(g);
  BoundaryTrace out(g);
  int n2 = g->n2(), nm = sp.nm();
  std::vector<std::complex<double>> row(nm);
  const std::complex<double> I(0, 1);
  for (int c = 0; c < b.components(); ++c) {
    double rb = g->radius(g->boundary_ring(c));
    sp.forward_ring(b.data() + (size_t)c * n2, row.data());
    for (int m = 0; m < nm; ++m) row[m] *= I * double(m == n2 / 2 ? 0 : m) / rb;
    sp.backward_ring(row.data(), out.data() + (size_t)c * n2);
  }
  return out;
}

// ---- interpolation ------------------------------------------------------------------------
namespace {

// Lagrange weights for target t given nodes xs (small stencils)
void lagrange_weights(const double* xs, int n, double t, double* w) {
  for (int i = 0; i < n; ++i) {
    double p = 1;
    for (int j = 0; j < n; ++j)
      if (j != i) p *= (t - xs[j]) / (xs[i] - xs[j]);
    w[i] = p;
  }
}

constexpr int kAng = 8;  // angular stencil width (order 8, even)
constexpr int kRad = 4;  // radial stencil width (cubic)

double torus_eval(const ScalarField& f, Vec2 x) {
  const auto& g = f.grid();
  double L = g->domain().period;
  int n1 = g->n1(), n2 = g->n2();
  double u = x.x / g->h1(), v = x.y / g->h2();
  int i0 = (int)std::floor(u), j0 = (int)std::floor(v);
  double xs[kAng], wx[kAng], ys[kAng], wy[kAng];
  for (int t = 0; t < kAng; ++t) xs[t] = i0 - 3 + t, ys[t] = j0 - 3 + t;
  lagrange_weights(xs, kAng, u, wx);
  lagrange_weights(ys, kAng, v, wy);
  double s = 0;
  for (int a = 0; a < kAng; ++a) {
    int ia = ((i0 - 3 + a) % n1 + n1) % n1;
    double rowsum = 0;
    for (int b = 0; b < kAng; ++b) {
      int jb = ((j0 - 3 + b) % n2 + n2) % n2;
      rowsum += wy[b] * f(ia, jb);
    }
    s += wx[a] * rowsum;
  }
  (void)L;
  return s;
}

double angular_eval(const ScalarField& f, int ring, double theta) {
  const auto& g = f.grid();
  int n2 = g->n2();
  double dth = g->h2();
  double u = theta / dth;
  int i0 = (int)std::floor(u);
  double xs[kAng], w[kAng];
  for (int t = 0; t < kAng; ++t) xs[t] = i0 - 3 + t;
  lagrange_weights(xs, kAng, u, w);
  double s = 0;
  for (int t = 0; t < kAng; ++t) {
    int it = ((i0 - 3 + t) % n2 + n2) % n2;
    s += w[t] * f(ring, it);
  }
  return s;
}

double polar_eval(const ScalarField& f, Vec2 x, const EvalOptions& opt) {
  const auto& g = f.grid();
  const Domain& dom = g->domain();
  int n1 = g->n1();
  double h = g->h1();
  double r = x.norm();
  double theta = (r > 0) ? std::atan2(x.y, x.x) : 0.0;
  if (theta < 0) theta += 2 * M_PI;

  double pad = opt.allow_exterior ? 0.75 * h : 1e-12 * std::max(1.0, dom.inradius());
  if (dom.kind == DomainKind::Disk) {
    require(r <= dom.radius + pad, ErrorCode::LeftDomain, "point outside disk");
  } else {
    require(r >= dom.r_inner - pad && r <= dom.r_outer + pad, ErrorCode::LeftDomain,
            "point outside annulus");
  }

  bool disk = dom.kind == DomainKind::Disk;
  // virtual uniform index along the ring ladder (ghost rings have negative index on the disk)
  double t = disk ? (r / h - 0.5) : ((r - dom.r_inner) / h);
  int lo = disk ? -2 : 0;
  int js = (int)std::floor(t) - (kRad / 2 - 1);
  js = std::max(lo, std::min(js, n1 - kRad));

  double xs[kRad], w[kRad], vals[kRad];
  for (int m = 0; m < kRad; ++m) {
    int j = js + m;
    if (j >= 0) {
      xs[m] = g->radius(j);
      vals[m] = angular_eval(f, j, theta);
    } else {
      int jr = -1 - j;  // parity ghost: value at (r_jr, theta+pi), coordinate -r_jr
      xs[m] = -g->radius(jr);
      double th2 = theta + M_PI;
      if (th2 >= 2 * M_PI) th2 -= 2 * M_PI;
      vals[m] = angular_eval(f, jr, th2);
    }
  }
  lagrange_weights(xs, kRad, r, w);
  double s = 0;
  for (int m = 0; m < kRad; ++m) s += w[m] * vals[m];
  return s;
}

}  // namespace

double eval_at(const ScalarField& f, Vec2 x, const EvalOptions& opt) {
  return f.grid()->is_polar() ? polar_eval(f, x, opt) : torus_eval(f, x);
}

Vec2 eval_at(const VectorField& v, Vec2 x, const EvalOptions& opt) {
  return {eval_at(v.comp(0), x, opt), eval_at(v.comp(1), x, opt)};
}

double circulation(const VectorField& v, const HomologyLoop& loop) {
  const auto& g = v.grid();
  if (loop.ring >= 0 && g->is_polar() && loop.ring < g->n1()) {
    // loop coincides with a grid ring: node-exact trapezoid (spectral accuracy, and exactly
    // zero for discrete gradients since tau.grad f = (1/r) dtheta f summed over the ring)
    int n2 = g->n2();
    double r = g->radius(loop.ring);
    double s = 0;
    for (int i = 0; i < n2; ++i) {
      double th = g->theta(i);
      Vec2 tau{-std::sin(th), std::cos(th)};
      s += v.at(loop.ring, i).dot(tau);
    }
    return loop.orientation * s * r * g->h2();
  }
  const Domain& dom = g->domain();
  int M = std::max(256, 4 * g->n2());
  double s = 0;
  for (int i = 0; i < M; ++i) {
    double phi = 2 * M_PI * i / M;
    Vec2 p{loop.center.x + loop.radius * std::cos(phi), loop.center.y + loop.radius * std::sin(phi)};
    require(dom.contains(p), ErrorCode::LoopOutsideDomain, "circulation loop leaves the domain");
    Vec2 tau{-std::sin(phi), std::cos(phi)};
    s += eval_at(v, p).dot(tau);
  }
  return loop.orientation * s * loop.radius * (2 * M_PI / M);
}

std::vector<double> harmonic_projection(const VectorField& v) {
  const auto& g = v.grid();
  switch (g->kind()) {
    case DomainKind::Torus: {
      Vec2 m = v.mean();
      return {m.x, m.y};
    }
    case DomainKind::Disk:
      return {};
    case DomainKind::Annulus:
      return {circulation(v, g->homology_loop())};
  }
  return {};
}

double norm_surrogate(const VectorField& v) { return v.sup_abs() + jacobian(v).frobenius_sup(); }

double norm_surrogate(const ScalarField& f) {
  VectorField g = gradient(f);
  return f.sup_abs() + g.sup_abs();
}

double trace_norm_surrogate(const BoundaryTrace& b) {
  return b.sup_abs() + tangential_derivative(b).sup_abs();
}

}  // namespace aht
