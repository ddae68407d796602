#include "aht/geometry.hpp"

#include <cmath>
#include <sstream>

namespace aht {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidResolution: return "InvalidResolution";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::WrongDomain: return "WrongDomain";
    case ErrorCode::NoBoundary: return "NoBoundary";
    case ErrorCode::LoopOutsideDomain: return "LoopOutsideDomain";
    case ErrorCode::OutOfCollar: return "OutOfCollar";
    case ErrorCode::NonzeroMean: return "NonzeroMean";
    case ErrorCode::IncompatibleData: return "IncompatibleData";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::InsufficientOrder: return "InsufficientOrder";
    case ErrorCode::MalformedExpr: return "MalformedExpr";
    case ErrorCode::MissingFactor: return "MissingFactor";
    case ErrorCode::WrongLocus: return "WrongLocus";
    case ErrorCode::WrongShape: return "WrongShape";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::UnstableStencil: return "UnstableStencil";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::LTooSmall: return "LTooSmall";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

Domain Domain::torus(double period) {
  require(period > 0, ErrorCode::InvalidArgument, "torus period must be positive");
  Domain d;
  d.kind = DomainKind::Torus;
  d.period = period;
  return d;
}

Domain Domain::disk(double radius) {
  require(radius > 0, ErrorCode::InvalidArgument, "disk radius must be positive");
  Domain d;
  d.kind = DomainKind::Disk;
  d.radius = radius;
  return d;
}

Domain Domain::annulus(double r_inner, double r_outer) {
  require(r_inner > 0 && r_outer > r_inner, ErrorCode::InvalidArgument,
          "annulus needs 0 < r_inner < r_outer");
  Domain d;
  d.kind = DomainKind::Annulus;
  d.r_inner = r_inner;
  d.r_outer = r_outer;
  return d;
}

int Domain::boundary_components() const {
  switch (kind) {
    case DomainKind::Torus: return 0;
    case DomainKind::Disk: return 1;
    case DomainKind::Annulus: return 2;
  }
  return 0;
}

int Domain::homology_rank() const { return kind == DomainKind::Annulus ? 1 : 0; }

int Domain::constraint_count() const {
  switch (kind) {
    case DomainKind::Torus: return 2;  // component means
    case DomainKind::Disk: return 0;
    case DomainKind::Annulus: return 1;
  }
  return 0;
}

double Domain::area() const {
  switch (kind) {
    case DomainKind::Torus: return period * period;
    case DomainKind::Disk: return M_PI * radius * radius;
    case DomainKind::Annulus: return M_PI * (r_outer * r_outer - r_inner * r_inner);
  }
  return 0;
}

double Domain::inradius() const {
  switch (kind) {
    case DomainKind::Torus: return period / 2;
    case DomainKind::Disk: return radius;
    case DomainKind::Annulus: return (r_outer - r_inner) / 2;
  }
  return 0;
}

bool Domain::contains(Vec2 p) const {
  double r = p.norm();
  switch (kind) {
    case DomainKind::Torus: return true;  // periodic wrap
    case DomainKind::Disk: return r <= radius;
    case DomainKind::Annulus: return r >= r_inner && r <= r_outer;
  }
  return false;
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind) {
    case DomainKind::Torus: os << "torus(period=" << period << ")"; break;
    case DomainKind::Disk: os << "disk(radius=" << radius << ")"; break;
    case DomainKind::Annulus: os << "annulus(" << r_inner << "," << r_outer << ")"; break;
  }
  return os.str();
}

Grid2D::Grid2D(const Domain& d, int n1, int n2) : dom_(d), n1_(n1), n2_(n2) {
  if (d.kind == DomainKind::Torus) {
    h1_ = d.period / n1;
    h2_ = d.period / n2;
    return;
  }
  h2_ = 2 * M_PI / n2;
  r_.resize(n1);
  wr_.resize(n1);
  if (d.kind == DomainKind::Disk) {
    // rings at (j+1/2)dr; last ring exactly on |x| = R. Midpoint weights are exact for the
    // measure r dr on full cells; the closing half-cell weight keeps sum(wr) = R^2/2 exact.
    h1_ = d.radius / (n1 - 0.5);
    for (int j = 0; j < n1; ++j) r_[j] = (j + 0.5) * h1_;
    for (int j = 0; j + 1 < n1; ++j) wr_[j] = h1_ * r_[j];
    wr_[n1 - 1] = 0.5 * h1_ * (d.radius - 0.25 * h1_);
  } else {
    h1_ = (d.r_outer - d.r_inner) / (n1 - 1);
    for (int j = 0; j < n1; ++j) r_[j] = d.r_inner + j * h1_;
    for (int j = 0; j < n1; ++j) wr_[j] = h1_ * r_[j];
    wr_[0] *= 0.5;
    wr_[n1 - 1] *= 0.5;
  }
}

std::shared_ptr<const Grid2D> Grid2D::create(const Domain& dom, int n1, int n2) {
  require(n1 >= 8 && n2 >= 8, ErrorCode::InvalidResolution, "need at least 8 nodes per direction");
  require(n2 % 2 == 0, ErrorCode::InvalidResolution, "angular/second resolution must be even");
  if (dom.kind == DomainKind::Torus)
    require(n1 % 2 == 0, ErrorCode::InvalidResolution, "torus resolutions must be even");
  return std::shared_ptr<const Grid2D>(new Grid2D(dom, n1, n2));
}

Vec2 Grid2D::node(int a, int b) const {
  if (!is_polar()) return {a * h1_, b * h2_};
  double th = theta(b);
  return {r_[a] * std::cos(th), r_[a] * std::sin(th)};
}

double Grid2D::node_weight(int a, int b) const {
  (void)b;
  if (!is_polar()) return h1_ * h2_;
  return wr_[a] * h2_;
}

int Grid2D::boundary_ring(int comp) const {
  require(is_polar(), ErrorCode::NoBoundary, "torus has no boundary");
  if (dom_.kind == DomainKind::Disk) {
    require(comp == 0, ErrorCode::InvalidArgument, "disk has one boundary component");
    return n1_ - 1;
  }
  require(comp == 0 || comp == 1, ErrorCode::InvalidArgument, "annulus has two boundary components");
  return comp == 0 ? n1_ - 1 : 0;
}

Vec2 Grid2D::boundary_node(int comp, int i) const { return node(boundary_ring(comp), i); }

Vec2 Grid2D::boundary_normal(int comp, int i) const {
  require(is_polar(), ErrorCode::NoBoundary, "torus has no boundary");
  double th = theta(i);
  double sgn = (comp == 0) ? 1.0 : -1.0;  // outer: +r_hat, inner: -r_hat
  return {sgn * std::cos(th), sgn * std::sin(th)};
}

double Grid2D::boundary_weight(int comp) const {
  return r_[boundary_ring(comp)] * h2_;
}

HomologyLoop Grid2D::homology_loop() const {
  require(dom_.kind == DomainKind::Annulus, ErrorCode::WrongDomain,
          "homology loop only exists on the annulus");
  double mid = 0.5 * (dom_.r_inner + dom_.r_outer);
  int best = 0;
  for (int j = 1; j < n1_; ++j)
    if (std::abs(r_[j] - mid) < std::abs(r_[best] - mid)) best = j;
  HomologyLoop loop;
  loop.radius = r_[best];
  loop.ring = best;
  return loop;
}

}  // namespace aht
