#pragma once
#include <complex>
#include <vector>

#include "aht/field.hpp"

namespace aht {

// Cached FFTW machinery for the periodic box. Plans use FFTW_ESTIMATE so planning is
// deterministic; execution copies through internal aligned buffers.
class TorusSpectral {
 public:
  static const TorusSpectral& get(const GridPtr& g);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int nc() const { return nc_; }  // complex columns = n2/2 + 1
  int cindex(int i, int j) const { return i * nc_ + j; }

  void forward(const ScalarField& f, std::vector<std::complex<double>>& out) const;
  void backward(const std::vector<std::complex<double>>& in, ScalarField& out) const;

  // wavenumber along dim 1 (rows) / dim 2 (cols); deriv variant zeroes the Nyquist mode
  double k1(int i) const { return k1_[i]; }
  double k2(int j) const { return k2_[j]; }
  double k1_deriv(int i) const { return k1d_[i]; }
  double k2_deriv(int j) const { return k2d_[j]; }

  ~TorusSpectral();
  TorusSpectral(const TorusSpectral&) = delete;

 private:
  explicit TorusSpectral(GridPtr g);
  GridPtr grid_;
  int n1_, n2_, nc_;
  std::vector<double> k1_, k2_, k1d_, k2d_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  double* rbuf_ = nullptr;
  void* cbuf_ = nullptr;
};

// Per-ring angular transforms for polar grids (real <-> half-complex along theta).
class AngularSpectral {
 public:
  static const AngularSpectral& get(const GridPtr& g);

  int nm() const { return nm_; }  // modes m = 0..n2/2
  // transforms all n1 rings; out has n1*nm coefficients, ring-major
  void forward(const ScalarField& f, std::vector<std::complex<double>>& out) const;
  void backward(const std::vector<std::complex<double>>& in, ScalarField& out) const;
  void forward_ring(const double* ring, std::complex<double>* out) const;
  void backward_ring(const std::complex<double>* in, double* ring) const;

  ~AngularSpectral();
  AngularSpectral(const AngularSpectral&) = delete;

 private:
  explicit AngularSpectral(GridPtr g);
  GridPtr grid_;
  int n2_, nm_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  double* rbuf_ = nullptr;
  void* cbuf_ = nullptr;
};

}  // namespace aht
