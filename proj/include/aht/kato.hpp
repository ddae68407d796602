#pragma once
#include <vector>

#include "aht/dynamics.hpp"
#include "aht/field.hpp"

namespace aht {

// One rung of the derivative ladder: the reconstructed field D^k u and the residuals of the
// div/curl/flux/circulation data it was rebuilt from (absolute sup norms), plus the mean or
// compatibility shifts projected out of the evaluated series before solving.
struct LadderLevel {
  int k = 0;
  double norm = 0;  // norm_surrogate(D^k u)
  double div_res = 0;
  double curl_res = 0;
  double bc_res = 0;
  double circ_res = 0;
  double div_shift = 0;   // discrete-mean / compatibility constant removed from the div data
  double curl_shift = 0;  // discrete mean removed from the curl data (torus)
};

// The material-derivative ladder at anchor time 0: Du[j] = D^j u with Du[0] = u = P y.
struct KatoDerivatives {
  VectorField y;
  std::vector<VectorField> Du;
  std::vector<LadderLevel> levels;  // k = 1..K
  double y_norm = 0;                // norm_surrogate(y)
  int order() const { return static_cast<int>(Du.size()) - 1; }
};

struct KatoOptions {
  double residual_gate_rel = 0;  // 0 picks 1e-6 (torus) / 0.25 (disk, annulus)
  bool enforce_gate = true;      // throw ResidualTooLarge past the gate
};

// Builds the ladder by evaluating the derived divergence/vorticity/boundary-flux series and
// the transported-loop kernel (constraints: kernel circulations on the annulus, kernel means
// on the torus) and reconstructing each D^k u from that data.
KatoDerivatives kato_ladder(const VectorField& y, int K, const KatoOptions& opt = {});

// The scalar P with  Du = grad P + (grad u)^T (y - u):  P = g - u.(y - u) where g solves
// lap g = div(u . grad y) with Neumann flux (u . grad y).n (boundary) or periodically (torus).
ScalarField direct_P_field(const VectorField& y);

// Du assembled from direct_P_field: the ladder-free route to the first material derivative.
VectorField material_derivative_direct(const VectorField& y);

// --- trajectory finite-difference oracle ------------------------------------------------------
// Independent check: D^k u (0, x0) is the k-th time derivative of t -> u(t, Phi(t, x0)).
// Short forward/backward evolutions provide u on a quarter-step lattice, trajectories are
// integrated through each seed, and a centered stencil on nodes j h, |j| <= k+1 is applied,
// with Richardson halving of h until two estimates agree.
struct FdSample {
  Vec2 x0;
  Vec2 value;
  double noise = 0;   // |estimate(h) - estimate(h/2)| at acceptance
  double h_used = 0;
};
struct FdOracleOptions {
  double h = 0;           // 0: 1e-3 / norm_surrogate(y0)
  int max_halvings = 3;
  double rel_tol = 0.02;  // Richardson acceptance threshold
  double abs_floor = 1e-10;
  double cfl_safety = 0.5;
  bool filter = true;
};
std::vector<FdSample> fd_oracle(const VectorField& y0, const std::vector<Vec2>& seeds, int k,
                                const FdOracleOptions& opt = {});

}  // namespace aht
