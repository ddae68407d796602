#pragma once
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "aht/errors.hpp"

namespace aht {

struct Vec2 {
  double x = 0, y = 0;
  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}
  Vec2 operator+(Vec2 b) const { return {x + b.x, y + b.y}; }
  Vec2 operator-(Vec2 b) const { return {x - b.x, y - b.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 b) const { return x * b.x + y * b.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
};
inline Vec2 operator*(double s, Vec2 v) { return v * s; }

enum class DomainKind { Torus, Disk, Annulus };

// Flat 2D domains the lab runs on: periodic box [0,P)^2, disk of radius R centered at the
// origin, or the annulus r_in < |x| < r_out. The annulus carries one homology loop; the torus
// replaces loop circulations by the two component means when harmonic parts are pinned down.
struct Domain {
  DomainKind kind = DomainKind::Torus;
  double period = 2 * M_PI;   // torus
  double radius = 1.0;        // disk
  double r_inner = 0.5;       // annulus
  double r_outer = 1.5;

  static Domain torus(double period);
  static Domain disk(double radius);
  static Domain annulus(double r_inner, double r_outer);

  bool has_boundary() const { return kind != DomainKind::Torus; }
  int boundary_components() const;
  int homology_rank() const;    // rank of the circulation constraint set Pi
  int constraint_count() const; // Pi size; torus counts its 2 mean constraints
  double area() const;
  double inradius() const;      // radius of the largest inscribed disk (collar sizing)
  bool contains(Vec2 p) const;
  std::string describe() const;
};

// Closed circle along which circulations are measured. When `ring >= 0` the loop coincides
// with a grid ring of the grid that created it and circulations are evaluated node-exactly.
struct HomologyLoop {
  Vec2 center{0, 0};
  double radius = 1.0;
  int orientation = +1;  // +1: counterclockwise
  int ring = -1;         // grid ring index, -1 for free-standing loops
  double length() const { return 2 * M_PI * radius; }
};

// Structured grid: torus n1 x n2 uniform nodes (x = i*h1, y = j*h2); disk/annulus n1 radial
// rings x n2 angular nodes, theta_i = i*dtheta. Disk rings sit at r_j = (j+1/2)*dr with the
// last ring exactly on the boundary; annulus rings are uniform and inclusive of both circles.
// Grids are immutable and shared; fields refuse to combine across different grids.
class Grid2D {
 public:
  static std::shared_ptr<const Grid2D> create(const Domain& dom, int n1, int n2);

  const Domain& domain() const { return dom_; }
  DomainKind kind() const { return dom_.kind; }
  bool is_polar() const { return dom_.kind != DomainKind::Torus; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int size() const { return n1_ * n2_; }
  int index(int a, int b) const { return a * n2_ + b; }

  // torus spacings / polar (dr, dtheta)
  double h1() const { return h1_; }
  double h2() const { return h2_; }

  double radius(int j) const { return r_[j]; }        // polar only
  double theta(int i) const { return i * h2_; }       // polar only
  Vec2 node(int a, int b) const;
  double node_weight(int a, int b) const;             // quadrature weight (area measure)
  double ring_weight(int j) const { return wr_[j]; }  // polar: integral weight for r dr

  // boundary bookkeeping (polar): component 0 = outer circle, component 1 = inner (annulus)
  int boundary_components() const { return dom_.boundary_components(); }
  int boundary_ring(int comp) const;
  Vec2 boundary_node(int comp, int i) const;
  Vec2 boundary_normal(int comp, int i) const;  // outward unit normal
  double boundary_weight(int comp) const;       // arclength weight per node

  // the annulus homology loop, snapped to the grid ring nearest the mid-circle
  HomologyLoop homology_loop() const;

 private:
  Grid2D(const Domain& d, int n1, int n2);
  Domain dom_;
  int n1_, n2_;
  double h1_, h2_;
  std::vector<double> r_, wr_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

inline void check_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  require(a.get() == b.get(), ErrorCode::GridMismatch, std::string(what) + ": fields live on different grids");
}

}  // namespace aht
