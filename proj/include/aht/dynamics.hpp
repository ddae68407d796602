#pragma once
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "aht/field.hpp"
#include "aht/leray.hpp"

namespace aht {

// Transported field y, its projection u = P y (kept in sync with y at all times), and the
// statistics of the step that produced the state.
struct AhtState {
  double t = 0;
  VectorField y;
  VectorField u;
  ScalarField p;  // y = u + grad p
  double div_residual = 0;
  double bc_residual = 0;
  double last_dt = 0;
  double cfl_fraction = 0;           // last_dt / largest admissible dt
  double filter_energy_removed = 0;  // cumulative integral of |y_pre - y_post|^2
};

// projects y0 and fills the caches; t = 0
AhtState make_state(VectorField y0);

struct StepOptions {
  double cfl_safety = 0.5;
  bool filter = true;
};

// largest dt the directional CFL rule admits for the cached velocity:
// safety / max(|u1|/h1 + |u2|/h2) (torus)  or  safety / max(|u_r|/dr + |u_th|/(r dth)) (polar)
double max_cfl_dt(const AhtState& s, double cfl_safety = 0.5);

// one classical 4-stage Runge-Kutta step of  d_t y = -(P y . grad) y, re-projecting at every
// stage, followed by a spectral tail filter (exponential on the torus, quartic taper of the
// top third of angular modes on polar grids). dt = 0 returns the state unchanged; dt < 0
// integrates backward (the system is time-reversible) with |dt| under the CFL gate.
AhtState step(const AhtState& s, double dt, const StepOptions& opt = {});

struct DiagnosticsRecord {
  double t = 0;
  double cost = std::numeric_limits<double>::quiet_NaN();  // int 1/2|y-x|^2; NaN on the torus
  double kinetic = 0;                                      // int |u|^2
  double u_sup = 0;
  double y_sup = 0;
  double div_residual = 0;
  double bc_residual = 0;
  double filter_energy_removed = 0;
  std::vector<double> drift;  // rearrangement drifts, one per battery function
};

// int 1/2 |y(x) - x|^2 dx; defined only where x itself is a map on the domain (disk/annulus)
double transport_cost(const AhtState& s);

// |(J2 - J1)/(t2 - t1) + (kin1 + kin2)/2| — the discrete defect of the dissipation identity
double dissipation_residual(const DiagnosticsRecord& a, const DiagnosticsRecord& b);

// Fixed battery of smooth statistics for rearrangement checks: all monomials of degree <= 4
// times a smooth range cutoff, plus three seeded Gaussian bumps.
struct TestBattery {
  std::vector<std::string> names;
  std::vector<std::function<double(Vec2)>> fns;
};
TestBattery default_battery(uint64_t seed = 2026);

// |int f(y) - int f(y_ref)| / (1 + |int f(y_ref)|) per battery function
std::vector<double> rearrangement_drift(const VectorField& y, const VectorField& y_ref,
                                        const TestBattery& battery);

DiagnosticsRecord diagnose(const AhtState& s, const VectorField* y_ref = nullptr,
                           const TestBattery* battery = nullptr);

struct RunOptions {
  double T = 1.0;
  double sample_every = 0.1;
  double cfl_safety = 0.5;
  bool filter = true;
  double fixed_dt = 0;       // > 0 forces this dt (still CFL-gated)
  double steady_tol = 1e-9;  // stop early when sup|u| drops below this
  bool with_drift = true;
};
struct RunResult {
  std::vector<AhtState> snapshots;  // t = 0, each sample time, final time
  std::vector<DiagnosticsRecord> records;
  bool terminated_steady = false;
};
RunResult run(const AhtState& s0, const RunOptions& opt);

}  // namespace aht
