#pragma once
#include "aht/field.hpp"

namespace aht {

// Poisson solve on the torus, spectral: requires (near-)zero mean data, returns the zero-mean
// solution of  lap(phi) = f.
ScalarField solve_periodic_poisson(const ScalarField& f);

struct NeumannOptions {
  // gate on |int f - bint b| relative to |f|_1 + |b|_1; callers producing data with discrete
  // operators pass a looser gate and let the solver project onto the compatible subspace
  double compat_rel_tol = 1e-8;
};
struct NeumannReport {
  double compat_residual = 0;   // raw |int f dA - oint b ds|
  double projection_shift = 0;  // constant removed from f to restore compatibility
};

// lap(p) = f in the disk/annulus, dp/dn = flux on the boundary (outward normal). Fourier in
// angle, second-order finite differences in radius, one dense LU per angular mode (factorization
// cached per grid). The m = 0 Neumann block is singular: the right-hand side is projected onto
// the range using the left null vector and the solution is returned with zero area mean.
ScalarField solve_neumann(const ScalarField& f, const BoundaryTrace& flux,
                          const NeumannOptions& opt = {}, NeumannReport* report = nullptr);

// lap(p) = f with p = bc on the boundary, same discretization
ScalarField solve_dirichlet(const ScalarField& f, const BoundaryTrace& bc);

}  // namespace aht
