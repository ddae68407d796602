#include "aht/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace aht {

namespace {
std::mutex g_cache_mutex;
std::map<const Grid2D*, std::unique_ptr<TorusSpectral>> g_torus_cache;
std::map<const Grid2D*, std::unique_ptr<AngularSpectral>> g_angular_cache;
// FFTW planning and execution through shared buffers are serialized; the solver stack is
// effectively single-threaded, this just keeps the cache safe for concurrent readers.
std::mutex g_exec_mutex;
}  // namespace

TorusSpectral::TorusSpectral(GridPtr g) : grid_(std::move(g)) {
  n1_ = grid_->n1();
  n2_ = grid_->n2();
  nc_ = n2_ / 2 + 1;
  double L = grid_->domain().period;
  double f = 2 * M_PI / L;
  k1_.resize(n1_);
  k1d_.resize(n1_);
  for (int i = 0; i < n1_; ++i) {
    int s = (i <= n1_ / 2) ? i : i - n1_;
    k1_[i] = f * s;
    k1d_[i] = (i == n1_ / 2) ? 0.0 : f * s;
  }
  k2_.resize(nc_);
  k2d_.resize(nc_);
  for (int j = 0; j < nc_; ++j) {
    k2_[j] = f * j;
    k2d_[j] = (j == n2_ / 2) ? 0.0 : f * j;
  }
  rbuf_ = fftw_alloc_real((size_t)n1_ * n2_);
  cbuf_ = fftw_alloc_complex((size_t)n1_ * nc_);
  plan_fwd_ = fftw_plan_dft_r2c_2d(n1_, n2_, rbuf_, (fftw_complex*)cbuf_, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_c2r_2d(n1_, n2_, (fftw_complex*)cbuf_, rbuf_, FFTW_ESTIMATE);
}

TorusSpectral::~TorusSpectral() {
  fftw_destroy_plan((fftw_plan)plan_fwd_);
  fftw_destroy_plan((fftw_plan)plan_bwd_);
  fftw_free(rbuf_);
  fftw_free(cbuf_);
}

const TorusSpectral& TorusSpectral::get(const GridPtr& g) {
  require(!g->is_polar(), ErrorCode::WrongDomain, "torus transform requested on polar grid");
  std::lock_guard<std::mutex> lk(g_cache_mutex);
  auto it = g_torus_cache.find(g.get());
  if (it == g_torus_cache.end())
    it = g_torus_cache.emplace(g.get(), std::unique_ptr<TorusSpectral>(new TorusSpectral(g))).first;
  return *it->second;
}

void TorusSpectral::forward(const ScalarField& f, std::vector<std::complex<double>>& out) const {
  check_same_grid(f.grid(), grid_, "fft forward");
  out.resize((size_t)n1_ * nc_);
  std::lock_guard<std::mutex> lk(g_exec_mutex);
  std::copy(f.data(), f.data() + (size_t)n1_ * n2_, rbuf_);
  fftw_execute((fftw_plan)plan_fwd_);
  double scale = 1.0 / ((double)n1_ * n2_);
  auto* c = (std::complex<double>*)cbuf_;
  for (size_t i = 0; i < out.size(); ++i) out[i] = c[i] * scale;
}

void TorusSpectral::backward(const std::vector<std::complex<double>>& in, ScalarField& out) const {
  if (!out.grid()) out = ScalarField(grid_);
  check_same_grid(out.grid(), grid_, "fft backward");
  require((int)in.size() == n1_ * nc_, ErrorCode::InvalidArgument, "fft backward: wrong size");
  std::lock_guard<std::mutex> lk(g_exec_mutex);
  auto* c = (std::complex<double>*)cbuf_;
  std::copy(in.begin(), in.end(), c);
  fftw_execute((fftw_plan)plan_bwd_);
  std::copy(rbuf_, rbuf_ + (size_t)n1_ * n2_, out.data());
}

AngularSpectral::AngularSpectral(GridPtr g) : grid_(std::move(g)) {
  n2_ = grid_->n2();
  nm_ = n2_ / 2 + 1;
  rbuf_ = fftw_alloc_real(n2_);
  cbuf_ = fftw_alloc_complex(nm_);
  plan_fwd_ = fftw_plan_dft_r2c_1d(n2_, rbuf_, (fftw_complex*)cbuf_, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_c2r_1d(n2_, (fftw_complex*)cbuf_, rbuf_, FFTW_ESTIMATE);
}

AngularSpectral::~AngularSpectral() {
  fftw_destroy_plan((fftw_plan)plan_fwd_);
  fftw_destroy_plan((fftw_plan)plan_bwd_);
  fftw_free(rbuf_);
  fftw_free(cbuf_);
}

const AngularSpectral& AngularSpectral::get(const GridPtr& g) {
  require(g->is_polar(), ErrorCode::WrongDomain, "angular transform requested on torus grid");
  std::lock_guard<std::mutex> lk(g_cache_mutex);
  auto it = g_angular_cache.find(g.get());
  if (it == g_angular_cache.end())
    it = g_angular_cache.emplace(g.get(), std::unique_ptr<AngularSpectral>(new AngularSpectral(g)))
             .first;
  return *it->second;
}

void AngularSpectral::forward_ring(const double* ring, std::complex<double>* out) const {
  std::lock_guard<std::mutex> lk(g_exec_mutex);
  std::copy(ring, ring + n2_, rbuf_);
  fftw_execute((fftw_plan)plan_fwd_);
  double scale = 1.0 / n2_;
  auto* c = (std::complex<double>*)cbuf_;
  for (int m = 0; m < nm_; ++m) out[m] = c[m] * scale;
}

void AngularSpectral::backward_ring(const std::complex<double>* in, double* ring) const {
  std::lock_guard<std::mutex> lk(g_exec_mutex);
  auto* c = (std::complex<double>*)cbuf_;
  std::copy(in, in + nm_, c);
  fftw_execute((fftw_plan)plan_bwd_);
  std::copy(rbuf_, rbuf_ + n2_, ring);
}

void AngularSpectral::forward(const ScalarField& f, std::vector<std::complex<double>>& out) const {
  check_same_grid(f.grid(), grid_, "angular forward");
  int n1 = grid_->n1();
  out.resize((size_t)n1 * nm_);
  for (int j = 0; j < n1; ++j) forward_ring(f.data() + (size_t)j * n2_, out.data() + (size_t)j * nm_);
}

void AngularSpectral::backward(const std::vector<std::complex<double>>& in, ScalarField& out) const {
  if (!out.grid()) out = ScalarField(grid_);
  check_same_grid(out.grid(), grid_, "angular backward");
  int n1 = grid_->n1();
  require((int)in.size() == n1 * nm_, ErrorCode::InvalidArgument, "angular backward: wrong size");
  for (int j = 0; j < n1; ++j) backward_ring(in.data() + (size_t)j * nm_, out.data() + (size_t)j * n2_);
}

}  // namespace aht
