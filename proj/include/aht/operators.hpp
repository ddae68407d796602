#pragma once
#include "aht/field.hpp"

namespace aht {

// Differential operators. Torus: spectral. Disk/annulus: 4th-order radial finite differences
// (centered stencils cross the disk origin via the parity map f(-r,th)=f(r,th+pi); one-sided
// at outer/inner rings) combined with spectral angular derivatives, assembled into Cartesian
// components. All operators return fields on the same grid.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField curl(const VectorField& v);  // scalar curl d1 v2 - d2 v1
JacobianField jacobian(const VectorField& v);

// pointwise algebra on jacobians / vectors
JacobianField matmul(const JacobianField& a, const JacobianField& b);
ScalarField trace(const JacobianField& a);
ScalarField asym(const JacobianField& a);  // a21 - a12 (scalar bridge of M - M^T)
VectorField apply(const JacobianField& a, const VectorField& v);             // A v
VectorField apply_transpose(const JacobianField& a, const VectorField& v);   // A^T v
VectorField advect(const VectorField& u, const JacobianField& grad_y);      // (u . grad) y

// boundary restrictions
BoundaryTrace normal_trace(const VectorField& v);
BoundaryTrace boundary_restrict(const ScalarField& f);
BoundaryTrace tangential_derivative(const BoundaryTrace& b);  // d/ds along the boundary

// interpolation ---------------------------------------------------------------------------
struct EvalOptions {
  bool allow_exterior = false;   // permit evaluation slightly outside a polar domain
};
double eval_at(const ScalarField& f, Vec2 x, const EvalOptions& opt = {});
Vec2 eval_at(const VectorField& v, Vec2 x, const EvalOptions& opt = {});

// circulation along a loop; grid-ring-aligned loops are summed node-exactly
double circulation(const VectorField& v, const HomologyLoop& loop);

// the projector's constraint functional Pi: torus -> (mean_1, mean_2); annulus -> (circulation
// around the homology loop); disk -> empty
std::vector<double> harmonic_projection(const VectorField& v);

// surrogate norms used wherever the estimates ask for C^1-type control
double norm_surrogate(const VectorField& v);        // sup|v| + sup|grad v|_F
double norm_surrogate(const ScalarField& f);        // sup|f| + sup|grad f|
double trace_norm_surrogate(const BoundaryTrace& b);  // sup|b| + sup|db/ds|

}  // namespace aht
