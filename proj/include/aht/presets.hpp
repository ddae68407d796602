#pragma once
#include <cstdint>
#include <string>

#include "aht/field.hpp"

namespace aht {

// Band-limited random smooth fields: sums of plane waves over the integer lattice
// |k|_inf <= kmax with N(0,1) weights damped by exp(-decay*|k|). On the torus the lattice is
// the periodic one; on disk/annulus the same synthesis is evaluated on the embedded nodes
// (entire functions, so smooth on any domain). Sampling uses a self-contained Box-Muller on
// top of mt19937_64 so a seed pins the field bit-for-bit.
struct RandomFieldSpec {
  uint64_t seed = 1;
  double amplitude = 1.0;
  double decay = 0.7;
  int kmax = 6;
};
ScalarField random_scalar(const GridPtr& g, const RandomFieldSpec& spec);
VectorField random_vector(const GridPtr& g, const RandomFieldSpec& spec);

// Initial data presets for runs.
//  - random_smooth: random_vector above
//  - gradient_steady: y = grad(phi), phi random scalar (a projector fixed point: u = Py = 0)
//  - rotation: y(x) = R_theta x on disk/annulus (closed-form relaxation oracle)
//  - ipm_embed: y = -(0, rho0) on the torus; the first component must stay identically zero
struct InitialSpec {
  std::string preset = "random_smooth";
  uint64_t seed = 1;
  double amplitude = 1.0;
  double decay = 0.7;
  int kmax = 6;
  double theta = 0.3;  // rotation angle
};
VectorField make_initial(const GridPtr& g, const InitialSpec& spec);

}  // namespace aht
