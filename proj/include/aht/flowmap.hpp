#pragma once
#include <vector>

#include "aht/combinatorics.hpp"
#include "aht/dynamics.hpp"
#include "aht/kato.hpp"

namespace aht {

// Velocity history of a run with cubic Lagrange interpolation in time, evaluated pointwise so
// trajectory integration never rebuilds whole fields.
class SnapshotSeries {
 public:
  SnapshotSeries(std::vector<double> times, std::vector<VectorField> velocities);
  static SnapshotSeries from_run(const RunResult& run);

  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }
  int count() const { return static_cast<int>(t_.size()); }
  double max_spacing() const;
  double max_speed() const;

  // cubic in t through the four snapshots bracketing t (degree drops near the ends and for
  // short series); spatial evaluation allows a small exterior pad on polar grids
  Vec2 velocity(double t, Vec2 x) const;
  const GridPtr& grid() const { return u_.front().grid(); }

 private:
  std::vector<double> t_;
  std::vector<VectorField> u_;
};

struct Trajectory {
  Vec2 x0;
  std::vector<double> t;
  std::vector<Vec2> x;  // x[i] = Phi(t[i], x0); x[0] = x0 exactly
  int clamp_events = 0; // boundary-tangency projections applied
  Vec2 end() const { return x.back(); }
};

// RK4 along the interpolated velocity; dt_cap > 0 pins the step, otherwise
// dt = min(max snapshot spacing, 1e-3 / max speed); snapped so the last step lands on T exactly
Trajectory integrate_trajectory(const SnapshotSeries& s, Vec2 x0, double T, double dt_cap = 0);

// x0 + sum_{k=1}^{K+1} t^k/k! (D^{k-1}u)(0, x0): the truncated time-Taylor series of the flow
// map, with the same point interpolation the trajectories use
Vec2 taylor_flow(const KatoDerivatives& kd, Vec2 x0, double t, int K);

struct RadiusEstimate {
  double empirical = 0;  // 1 / limsup (|D^k u|/k!)^{1/k} by least squares; +inf for zero ladders
  double bound = 0;      // 1 / (C_Omega L |y|)
  int points_used = 0;
  double slope = 0;      // fit internals, reported for diagnostics
  double intercept = 0;
};
RadiusEstimate radius_estimate(const KatoDerivatives& kd, double L_star,
                               const DomainConstants& consts);

}  // namespace aht
