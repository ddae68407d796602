#pragma once
#include <optional>

#include "aht/field.hpp"

namespace aht {

struct LerayResult {
  VectorField u;  // divergence-free, tangent part
  ScalarField p;  // y = u + grad p
  double div_residual = 0;     // sup |div u|
  double bc_residual = 0;      // sup |u.n| (0 on the torus)
  double compat_shift = 0;     // constant projected out of div y for the Neumann solve
};

// Leray projection u = P y = y - grad p. Torus: exact spectral projection. Disk/annulus:
// p solves the Neumann problem lap p = div y, dp/dn = y.n; circulations and means of y are
// untouched by construction.
LerayResult leray_project(const VectorField& y);

// Data for the reconstruction u = grad(phi) + perp-grad(psi) + h:
//   div:   divergence target
//   curl:  scalar curl target
//   normal: u.n on the boundary (disk/annulus)
//   constraints: Pi u — torus (mean1, mean2); annulus (circulation); disk ()
struct HodgeData {
  ScalarField div;
  ScalarField curl;
  std::optional<BoundaryTrace> normal;
  std::vector<double> constraints;
};
struct HodgeReport {
  double div_res = 0, curl_res = 0, bc_res = 0;
  double constraint_err = 0;
  double compat_shift = 0;
};
VectorField div_curl_reconstruct(const HodgeData& data, HodgeReport* report = nullptr);

// Randomized surrogate for the div/curl/trace/circulation regularity constant: the max over
// seeded band-limited trials of |f| / (|div f| + |curl f| + |f.n| + |Pi f|). Trials whose
// denominator vanishes are skipped.
double estimate_regularity_constant(const GridPtr& g, int trials, uint64_t seed);

// Randomized surrogate for the projection-boundedness constant sup |P y| / |y|.
double estimate_projection_constant(const GridPtr& g, int trials, uint64_t seed);

}  // namespace aht
