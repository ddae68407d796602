#pragma once
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "aht/combinatorics.hpp"
#include "aht/dynamics.hpp"
#include "aht/geometry.hpp"
#include "aht/presets.hpp"

namespace aht {

// Experiment configuration: one JSON file fully determines one experiment. Every block is
// optional and every key has a default, but unknown keys are rejected outright so typos
// cannot silently fall back to defaults.

struct DomainConfig {
  std::string kind = "torus";  // torus | disk | annulus
  double period = 2 * M_PI;    // torus
  double radius = 1.5;         // disk
  double r_inner = 0.75;       // annulus
  double r_outer = 1.75;
  int n1 = 64;
  int n2 = 64;
};

struct KatoConfig {
  int K = 3;               // ladder depth
  int fd_max_order = 3;    // deepest derivative cross-checked against trajectory stencils
  int fd_points = 3;       // probe points for the stencil oracle
  int taylor_K = 5;        // highest reported series truncation
  int taylor_points = 100; // trajectory seeds for the series-vs-integration table
  double t_factor = 0.1;   // series horizon t* = t_factor / |y0|
  double ode_sample = 0;   // reference-trajectory snapshot cadence; 0 picks t*/8
};

// entries < 0 are derived at run time (estimators / domain geometry)
struct ConstantsConfig {
  double c_rho = -1;
  double C_Gamma = -1;
  double C_Omega = -1;
  double c_r = -1;
};

struct ExperimentConfig {
  DomainConfig domain;
  InitialSpec initial;
  RunOptions run;
  KatoConfig kato;
  ConstantsConfig constants;
  std::string output = "out";
};

// strict parse: BadConfig on unknown keys, wrong types, or out-of-range values
ExperimentConfig parse_config(const nlohmann::json& j);
// IoError when the file cannot be read; BadConfig when it is not valid JSON
ExperimentConfig load_config(const std::string& path);

// fully resolved echo of a config (all defaults filled in), embedded into report provenance
nlohmann::json config_json(const ExperimentConfig& c);

GridPtr make_grid(const DomainConfig& d);

// fills the unset constants: distance-tensor growth from the domain, the loop constant from
// the homology geometry (sqrt(2) for the two mean constraints on the torus), and seeded
// randomized estimates for the projection and regularity constants
DomainConstants resolve_constants(const GridPtr& g, const ConstantsConfig& o);
nlohmann::json constants_json(const DomainConstants& c);

}  // namespace aht
