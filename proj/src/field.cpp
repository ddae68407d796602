#include "aht/field.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "aht/report.hpp"

namespace aht {

ScalarField::ScalarField(GridPtr g, std::function<double(Vec2)> f) : ScalarField(std::move(g)) {
  for (int a = 0; a < grid_->n1(); ++a)
    for (int b = 0; b < grid_->n2(); ++b) v_[grid_->index(a, b)] = f(grid_->node(a, b));
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  check_same_grid(grid_, o.grid_, "scalar add");
  for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  check_same_grid(grid_, o.grid_, "scalar sub");
  for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

double ScalarField::sup_abs() const {
  double m = 0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double ScalarField::integral() const {
  double s = 0;
  for (int a = 0; a < grid_->n1(); ++a) {
    double row = 0;
    for (int b = 0; b < grid_->n2(); ++b) row += v_[grid_->index(a, b)];
    s += row * grid_->node_weight(a, 0);
  }
  return s;
}

double ScalarField::mean() const { return integral() / grid_->domain().area(); }

bool ScalarField::finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

VectorField::VectorField(GridPtr g, std::function<Vec2(Vec2)> f) : VectorField(g) {
  for (int a = 0; a < g->n1(); ++a)
    for (int b = 0; b < g->n2(); ++b) set(a, b, f(g->node(a, b)));
}

VectorField::VectorField(ScalarField c0, ScalarField c1) : c_{std::move(c0), std::move(c1)} {
  check_same_grid(c_[0].grid(), c_[1].grid(), "vector field components");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  c_[0] += o.c_[0];
  c_[1] += o.c_[1];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  c_[0] -= o.c_[0];
  c_[1] -= o.c_[1];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  c_[0] *= s;
  c_[1] *= s;
  return *this;
}

double VectorField::sup_abs() const {
  double m = 0;
  const ScalarField &a = c_[0], &b = c_[1];
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::hypot(a[i], b[i]));
  return m;
}

Vec2 VectorField::mean() const { return {c_[0].mean(), c_[1].mean()}; }

bool VectorField::finite() const { return c_[0].finite() && c_[1].finite(); }

BoundaryTrace::BoundaryTrace(GridPtr g, double fill)
    : grid_(std::move(g)), ncomp_(grid_->boundary_components()), v_(ncomp_ * grid_->n2(), fill) {
  require(ncomp_ > 0, ErrorCode::NoBoundary, "boundary trace on a boundaryless domain");
}

double BoundaryTrace::sup_abs() const {
  double m = 0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double BoundaryTrace::integral() const {
  double s = 0;
  for (int c = 0; c < ncomp_; ++c) {
    double w = grid_->boundary_weight(c);
    for (int i = 0; i < grid_->n2(); ++i) s += w * (*this)(c, i);
  }
  return s;
}

BoundaryTrace& BoundaryTrace::operator-=(const BoundaryTrace& o) {
  check_same_grid(grid_, o.grid_, "trace sub");
  for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

BoundaryTrace& BoundaryTrace::operator+=(const BoundaryTrace& o) {
  check_same_grid(grid_, o.grid_, "trace add");
  for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

BoundaryTrace& BoundaryTrace::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

double JacobianField::frobenius_sup() const {
  double mx = 0;
  int n = m[0][0].size();
  for (int i = 0; i < n; ++i) {
    double f = m[0][0][i] * m[0][0][i] + m[0][1][i] * m[0][1][i] + m[1][0][i] * m[1][0][i] +
               m[1][1][i] * m[1][1][i];
    mx = std::max(mx, f);
  }
  return std::sqrt(mx);
}

static void write_csv_impl(const std::string& path, const GridPtr& g,
                           const std::vector<const ScalarField*>& comps) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::IoError, "cannot open " + path);
  out << "x,y";
  for (size_t c = 0; c < comps.size(); ++c) out << ",c" << c;
  out << "\n";
  for (int a = 0; a < g->n1(); ++a)
    for (int b = 0; b < g->n2(); ++b) {
      Vec2 p = g->node(a, b);
      out << format_double(p.x) << ',' << format_double(p.y);
      for (const ScalarField* f : comps) out << ',' << format_double((*f)(a, b));
      out << "\n";
    }
}

void write_field_csv(const std::string& path, const VectorField& f) {
  write_csv_impl(path, f.grid(), {&f.comp(0), &f.comp(1)});
}

void write_field_csv(const std::string& path, const ScalarField& f) {
  write_csv_impl(path, f.grid(), {&f});
}

void write_field_binary(const std::string& path, const VectorField& f) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::IoError, "cannot open " + path);
  const char magic[8] = {'A', 'H', 'T', 'F', 'L', 'D', '0', '1'};
  int32_t dims[3] = {f.grid()->n1(), f.grid()->n2(), 2};
  out.write(magic, 8);
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  for (int c = 0; c < 2; ++c)
    out.write(reinterpret_cast<const char*>(f.comp(c).data()), sizeof(double) * f.comp(c).size());
}

VectorField read_field_binary(const std::string& path, const GridPtr& g) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoError, "cannot open " + path);
  char magic[8];
  int32_t dims[3];
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  require(in.good() && std::memcmp(magic, "AHTFLD01", 8) == 0, ErrorCode::IoError,
          "bad field file header: " + path);
  require(dims[0] == g->n1() && dims[1] == g->n2() && dims[2] == 2, ErrorCode::GridMismatch,
          "field file dims do not match grid: " + path);
  VectorField f(g);
  for (int c = 0; c < 2; ++c)
    in.read(reinterpret_cast<char*>(f.comp(c).data()), sizeof(double) * f.comp(c).size());
  require(in.good(), ErrorCode::IoError, "truncated field file: " + path);
  return f;
}

}  // namespace aht
