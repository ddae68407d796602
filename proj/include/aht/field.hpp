#pragma once
#include <functional>
#include <string>
#include <vector>

#include "aht/geometry.hpp"

namespace aht {

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr g, double fill = 0.0) : grid_(std::move(g)), v_(grid_->size(), fill) {}
  ScalarField(GridPtr g, std::function<double(Vec2)> f);

  const GridPtr& grid() const { return grid_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator()(int a, int b) { return v_[grid_->index(a, b)]; }
  double operator()(int a, int b) const { return v_[grid_->index(a, b)]; }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }
  int size() const { return (int)v_.size(); }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  ScalarField operator+(const ScalarField& o) const { ScalarField r = *this; return r += o; }
  ScalarField operator-(const ScalarField& o) const { ScalarField r = *this; return r -= o; }
  ScalarField operator*(double s) const { ScalarField r = *this; return r *= s; }

  double sup_abs() const;
  double integral() const;         // quadrature
  double mean() const;             // integral / area
  bool finite() const;

 private:
  GridPtr grid_;
  std::vector<double> v_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(GridPtr g) : c_{ScalarField(g), ScalarField(g)} {}
  VectorField(GridPtr g, std::function<Vec2(Vec2)> f);
  VectorField(ScalarField c0, ScalarField c1);

  const GridPtr& grid() const { return c_[0].grid(); }
  ScalarField& comp(int i) { return c_[i]; }
  const ScalarField& comp(int i) const { return c_[i]; }
  Vec2 at(int a, int b) const { return {c_[0](a, b), c_[1](a, b)}; }
  void set(int a, int b, Vec2 v) { c_[0](a, b) = v.x; c_[1](a, b) = v.y; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField operator+(const VectorField& o) const { VectorField r = *this; return r += o; }
  VectorField operator-(const VectorField& o) const { VectorField r = *this; return r -= o; }
  VectorField operator*(double s) const { VectorField r = *this; return r *= s; }

  double sup_abs() const;  // sup of |v(x)|_2
  Vec2 mean() const;
  bool finite() const;

 private:
  ScalarField c_[2];
};

// Values attached to boundary nodes, one block of n2 values per boundary component
// (component 0 = outer circle, component 1 = inner circle on the annulus).
class BoundaryTrace {
 public:
  BoundaryTrace() = default;
  explicit BoundaryTrace(GridPtr g, double fill = 0.0);

  const GridPtr& grid() const { return grid_; }
  int components() const { return ncomp_; }
  int nodes_per_component() const { return grid_->n2(); }
  double& operator()(int comp, int i) { return v_[comp * grid_->n2() + i]; }
  double operator()(int comp, int i) const { return v_[comp * grid_->n2() + i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  double sup_abs() const;
  double integral() const;  // against arclength
  BoundaryTrace& operator-=(const BoundaryTrace& o);
  BoundaryTrace& operator+=(const BoundaryTrace& o);
  BoundaryTrace& operator*=(double s);

 private:
  GridPtr grid_;
  int ncomp_ = 0;
  std::vector<double> v_;
};

// (grad v)_{ij} = d_j v_i: row = component, column = derivative direction.
struct JacobianField {
  ScalarField m[2][2];
  const GridPtr& grid() const { return m[0][0].grid(); }
  double frobenius_sup() const;
};

// --- serialization -----------------------------------------------------------------------
// CSV: one row per node, "x,y,c0[,c1]". Binary: magic + dims + raw doubles.
void write_field_csv(const std::string& path, const VectorField& f);
void write_field_csv(const std::string& path, const ScalarField& f);
void write_field_binary(const std::string& path, const VectorField& f);
VectorField read_field_binary(const std::string& path, const GridPtr& g);

}  // namespace aht
