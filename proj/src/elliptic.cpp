#include "aht/elliptic.hpp"

#include <Eigen/Dense>
#include <map>
#include <mutex>

#include "aht/fft.hpp"

namespace aht {

ScalarField solve_periodic_poisson(const ScalarField& f) {
  const auto& g = f.grid();
  require(!g->is_polar(), ErrorCode::WrongDomain, "periodic solve needs a torus grid");
  double mean = f.integral();
  require(std::abs(mean) <= 1e-10 * (f.sup_abs() + 1e-300) * g->domain().area() + 1e-300,
          ErrorCode::NonzeroMean, "periodic Poisson data must have zero mean");
  const auto& sp = TorusSpectral::get(g);
  std::vector<std::complex<double>> F;
  sp.forward(f, F);
  for (int i = 0; i < sp.n1(); ++i)
    for (int j = 0; j < sp.nc(); ++j) {
      double k2 = sp.k1(i) * sp.k1(i) + sp.k2(j) * sp.k2(j);
      auto& c = F[sp.cindex(i, j)];
      c = (k2 == 0) ? 0.0 : c / (-k2);
    }
  ScalarField phi(g);
  sp.backward(F, phi);
  return phi;
}

namespace {

enum class Bc { Neumann, Dirichlet };

// Fornberg's recurrence: weights of derivatives 0..maxd at z over arbitrary nodes x.
// Column d of the result holds the d-th-derivative weights.
Eigen::MatrixXd fd_weights(double z, const std::vector<double>& x, int maxd) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, maxd + 1);
  double c1 = 1.0, c4 = x[0] - z;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, maxd);
    double c2 = 1.0, c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

struct PolarSolver {
  GridPtr grid;
  Bc bc;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;  // per mode, pinned variant at m=0 Neumann
  Eigen::VectorXd left_null;                             // m=0 Neumann consistency functional
  std::vector<char> is_pde_row;
  int pinned_row = -1;

  void build() {
    const Grid2D& g = *grid;
    int n = g.n1();
    int nm = g.n2() / 2 + 1;
    bool disk = g.kind() == DomainKind::Disk;
    lu.resize(nm);
    is_pde_row.assign(n, 0);

    // radial position of a (possibly ghost) ring index; disk ghosts j < 0 sit across the
    // origin at -r_{-1-j} and alias ring -1-j with parity (-1)^m
    auto pos = [&](int t) { return t >= 0 ? g.radius(t) : -g.radius(-1 - t); };

    for (int m = 0; m < nm; ++m) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
      // 4th-order rows matching the field operators: centered 5-point stencils (crossing the
      // origin by parity on the disk), 6-point one-sided rows beside the boundaries
      auto pde_row = [&](int j) {
        std::vector<int> idx;
        if (j == n - 2 || (!disk && j == 1)) {
          const int j0 = j == 1 ? 0 : n - 6;
          for (int t = j0; t < j0 + 6; ++t) idx.push_back(t);
        } else {
          for (int t = j - 2; t <= j + 2; ++t) idx.push_back(t);
        }
        const double r = g.radius(j);
        std::vector<double> xs(idx.size());
        for (size_t q = 0; q < idx.size(); ++q) xs[q] = pos(idx[q]);
        const Eigen::MatrixXd W = fd_weights(r, xs, 2);
        for (size_t q = 0; q < idx.size(); ++q) {
          const int col = idx[q] >= 0 ? idx[q] : -1 - idx[q];
          const double sign = (idx[q] >= 0 || m % 2 == 0) ? 1.0 : -1.0;
          A(j, col) += sign * (W(q, 2) + W(q, 1) / r);
        }
        A(j, j) += -double(m) * m / (r * r);
        if (m == 0) is_pde_row[j] = 1;
      };
      int j_lo = disk ? 0 : 1;
      for (int j = j_lo; j <= n - 2; ++j) pde_row(j);

      // outer boundary row: dp/dn = +dp/dr, one-sided 5-point (4th order)
      if (bc == Bc::Dirichlet) {
        A(n - 1, n - 1) = 1.0;
      } else {
        std::vector<double> xs(5);
        for (int q = 0; q < 5; ++q) xs[q] = g.radius(n - 5 + q);
        const Eigen::MatrixXd W = fd_weights(g.radius(n - 1), xs, 1);
        for (int q = 0; q < 5; ++q) A(n - 1, n - 5 + q) = W(q, 1);
      }
      if (!disk) {  // inner boundary row: dp/dn = -dp/dr
        if (bc == Bc::Dirichlet) {
          A(0, 0) = 1.0;
        } else {
          std::vector<double> xs(5);
          for (int q = 0; q < 5; ++q) xs[q] = g.radius(q);
          const Eigen::MatrixXd W = fd_weights(g.radius(0), xs, 1);
          for (int q = 0; q < 5; ++q) A(0, q) = -W(q, 1);
        }
      }

      if (bc == Bc::Neumann && m == 0) {
        // singular block: constants span the kernel. Extract the left null vector for the
        // consistency projection, then pin the row where it weighs most.
        Eigen::FullPivLU<Eigen::MatrixXd> full(A.transpose());
        full.setThreshold(1e-10);
        Eigen::MatrixXd ker = full.kernel();
        require(ker.cols() >= 1, ErrorCode::ResidualTooLarge, "m=0 Neumann block not singular");
        left_null = ker.col(0);
        int best = -1;
        double bestv = -1;
        for (int j = 0; j < n; ++j)
          if (is_pde_row[j] && std::abs(left_null[j]) > bestv) {
            bestv = std::abs(left_null[j]);
            best = j;
          }
        pinned_row = best;
        Eigen::MatrixXd Ap = A;
        Ap.row(pinned_row).setZero();
        Ap(pinned_row, 0) = 1.0;
        lu[m].compute(Ap);
      } else {
        lu[m].compute(A);
      }
    }
  }
};

std::mutex g_solver_mutex;
std::map<std::pair<const Grid2D*, int>, std::unique_ptr<PolarSolver>> g_solvers;

const PolarSolver& get_solver(const GridPtr& g, Bc bc) {
  std::lock_guard<std::mutex> lk(g_solver_mutex);
  auto key = std::make_pair(g.get(), (int)bc);
  auto it = g_solvers.find(key);
  if (it == g_solvers.end()) {
    auto s = std::make_unique<PolarSolver>();
    s->grid = g;
    s->bc = bc;
    s->build();
    it = g_solvers.emplace(key, std::move(s)).first;
  }
  return *it->second;
}

ScalarField polar_solve(const ScalarField& f, const BoundaryTrace& b, Bc bc,
                        const NeumannOptions* opt, NeumannReport* report) {
  const auto& g = f.grid();
  require(g->is_polar(), ErrorCode::WrongDomain, "polar solve needs a disk/annulus grid");
  check_same_grid(g, b.grid(), "polar solve");
  require(f.finite(), ErrorCode::NonFiniteField, "polar solve: non-finite data");

  ScalarField fwork = f;
  if (bc == Bc::Neumann) {
    double defect = f.integral() - b.integral();
    double scale = 0;
    {  // |f|_1 + |b|_1
      ScalarField absf = f;
      for (int i = 0; i < absf.size(); ++i) absf[i] = std::abs(absf[i]);
      scale += absf.integral();
      for (int c = 0; c < b.components(); ++c)
        for (int i = 0; i < g->n2(); ++i) scale += g->boundary_weight(c) * std::abs(b(c, i));
    }
    require(std::abs(defect) <= opt->compat_rel_tol * (scale + 1e-300) + 1e-300,
            ErrorCode::IncompatibleData, "Neumann data violates the compatibility condition");
    double shift = defect / g->domain().area();
    for (int i = 0; i < fwork.size(); ++i) fwork[i] -= shift;
    if (report) {
      report->compat_residual = std::abs(defect);
      report->projection_shift = shift;
    }
  }

  const PolarSolver& S = get_solver(g, bc);
  const auto& sp = AngularSpectral::get(g);
  int n1 = g->n1(), nm = sp.nm();
  bool disk = g->kind() == DomainKind::Disk;

  std::vector<std::complex<double>> fhat;
  sp.forward(fwork, fhat);
  std::vector<std::complex<double>> bhat((size_t)b.components() * nm);
  for (int c = 0; c < b.components(); ++c)
    sp.forward_ring(b.data() + (size_t)c * g->n2(), bhat.data() + (size_t)c * nm);

  std::vector<std::complex<double>> phat((size_t)n1 * nm);
  Eigen::VectorXd re(n1), im(n1);
  for (int m = 0; m < nm; ++m) {
    for (int j = 0; j < n1; ++j) {
      std::complex<double> rhs = 0.0;
      bool pde = disk ? (j <= n1 - 2) : (j >= 1 && j <= n1 - 2);
      if (pde)
        rhs = fhat[(size_t)j * nm + m];
      else if (j == n1 - 1)
        rhs = bhat[m];  // outer trace, component 0
      else
        rhs = bhat[(size_t)nm + m];  // inner trace, component 1
      re[j] = rhs.real();
      im[j] = rhs.imag();
    }
    if (S.bc == Bc::Neumann && m == 0) {
      // project rhs onto the range: subtract c * (indicator of PDE rows)
      double ld = 0, lr = 0;
      for (int j = 0; j < n1; ++j) {
        if (S.is_pde_row[j]) ld += S.left_null[j];
        lr += S.left_null[j] * re[j];
      }
      double c = lr / ld;
      for (int j = 0; j < n1; ++j)
        if (S.is_pde_row[j]) re[j] -= c;
      re[S.pinned_row] = 0.0;  // pinned unknown value
      im.setZero();            // m=0 of real data is real
    }
    Eigen::VectorXd xr = S.lu[m].solve(re);
    Eigen::VectorXd xi = S.lu[m].solve(im);
    for (int j = 0; j < n1; ++j) phat[(size_t)j * nm + m] = {xr[j], xi[j]};
  }

  ScalarField p(g);
  sp.backward(phat, p);
  if (bc == Bc::Neumann) {
    double mean = p.mean();
    for (int i = 0; i < p.size(); ++i) p[i] -= mean;
  }
  return p;
}

}  // namespace

ScalarField solve_neumann(const ScalarField& f, const BoundaryTrace& flux,
                          const NeumannOptions& opt, NeumannReport* report) {
  return polar_solve(f, flux, Bc::Neumann, &opt, report);
}

ScalarField solve_dirichlet(const ScalarField& f, const BoundaryTrace& bc) {
  return polar_solve(f, bc, Bc::Dirichlet, nullptr, nullptr);
}

}  // namespace aht
