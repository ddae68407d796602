#include "aht/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aht/leray.hpp"
#include "aht/signed_distance.hpp"
#include "aht/symbolic.hpp"

namespace aht {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& block, const std::set<std::string>& allowed) {
  require(j.is_object(), ErrorCode::BadConfig, "config block '" + block + "' must be an object");
  for (const auto& item : j.items())
    require(allowed.count(item.key()) != 0, ErrorCode::BadConfig,
            "unknown key '" + item.key() + "' in config block '" + block + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& block) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::BadConfig, "key '" + std::string(key) + "' in block '" + block +
                                   "' has the wrong type");
  }
}

void parse_domain(const json& j, DomainConfig& d) {
  check_keys(j, "domain", {"kind", "period", "radius", "r_inner", "r_outer", "n1", "n2"});
  read(j, "kind", d.kind, "domain");
  read(j, "period", d.period, "domain");
  read(j, "radius", d.radius, "domain");
  read(j, "r_inner", d.r_inner, "domain");
  read(j, "r_outer", d.r_outer, "domain");
  read(j, "n1", d.n1, "domain");
  read(j, "n2", d.n2, "domain");
  require(d.kind == "torus" || d.kind == "disk" || d.kind == "annulus", ErrorCode::BadConfig,
          "domain.kind must be torus, disk or annulus");
}

void parse_initial(const json& j, InitialSpec& s) {
  check_keys(j, "initial", {"preset", "seed", "amplitude", "decay", "kmax", "theta"});
  read(j, "preset", s.preset, "initial");
  read(j, "seed", s.seed, "initial");
  read(j, "amplitude", s.amplitude, "initial");
  read(j, "decay", s.decay, "initial");
  read(j, "kmax", s.kmax, "initial");
  read(j, "theta", s.theta, "initial");
}

void parse_run(const json& j, RunOptions& r) {
  check_keys(j, "run",
             {"T", "sample_every", "cfl_safety", "filter", "fixed_dt", "steady_tol",
              "with_drift"});
  read(j, "T", r.T, "run");
  read(j, "sample_every", r.sample_every, "run");
  read(j, "cfl_safety", r.cfl_safety, "run");
  read(j, "filter", r.filter, "run");
  read(j, "fixed_dt", r.fixed_dt, "run");
  read(j, "steady_tol", r.steady_tol, "run");
  read(j, "with_drift", r.with_drift, "run");
  require(r.T >= 0, ErrorCode::BadConfig, "run.T must be nonnegative");
  require(r.sample_every > 0, ErrorCode::BadConfig, "run.sample_every must be positive");
  require(r.cfl_safety > 0 && r.cfl_safety <= 1, ErrorCode::BadConfig,
          "run.cfl_safety must lie in (0, 1]");
}

void parse_kato(const json& j, KatoConfig& k) {
  check_keys(j, "kato",
             {"K", "fd_max_order", "fd_points", "taylor_K", "taylor_points", "t_factor",
              "ode_sample"});
  read(j, "K", k.K, "kato");
  read(j, "fd_max_order", k.fd_max_order, "kato");
  read(j, "fd_points", k.fd_points, "kato");
  read(j, "taylor_K", k.taylor_K, "kato");
  read(j, "taylor_points", k.taylor_points, "kato");
  read(j, "t_factor", k.t_factor, "kato");
  read(j, "ode_sample", k.ode_sample, "kato");
  require(k.K >= 1 && k.K <= kMaxSeriesOrder, ErrorCode::BadConfig,
          "kato.K must lie in 1.." + std::to_string(kMaxSeriesOrder));
  require(k.fd_max_order >= 1 && k.fd_max_order <= 4, ErrorCode::BadConfig,
          "kato.fd_max_order must lie in 1..4");
  require(k.fd_points >= 1, ErrorCode::BadConfig, "kato.fd_points must be positive");
  require(k.taylor_K >= 1 && k.taylor_K <= kMaxSeriesOrder, ErrorCode::BadConfig,
          "kato.taylor_K must lie in 1.." + std::to_string(kMaxSeriesOrder));
  require(k.taylor_points >= 1, ErrorCode::BadConfig, "kato.taylor_points must be positive");
  require(k.t_factor > 0, ErrorCode::BadConfig, "kato.t_factor must be positive");
}

void parse_constants(const json& j, ConstantsConfig& c) {
  check_keys(j, "constants", {"c_rho", "C_Gamma", "C_Omega", "c_r"});
  read(j, "c_rho", c.c_rho, "constants");
  read(j, "C_Gamma", c.C_Gamma, "constants");
  read(j, "C_Omega", c.C_Omega, "constants");
  read(j, "c_r", c.c_r, "constants");
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig c;
  check_keys(j, "<root>", {"domain", "initial", "run", "kato", "constants", "output"});
  if (j.contains("domain")) parse_domain(j.at("domain"), c.domain);
  if (j.contains("initial")) parse_initial(j.at("initial"), c.initial);
  if (j.contains("run")) parse_run(j.at("run"), c.run);
  if (j.contains("kato")) parse_kato(j.at("kato"), c.kato);
  if (j.contains("constants")) parse_constants(j.at("constants"), c.constants);
  read(j, "output", c.output, "<root>");
  require(!c.output.empty(), ErrorCode::BadConfig, "output directory must not be empty");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoError, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadConfig, "config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["domain"] = {{"kind", c.domain.kind},   {"period", c.domain.period},
                 {"radius", c.domain.radius}, {"r_inner", c.domain.r_inner},
                 {"r_outer", c.domain.r_outer}, {"n1", c.domain.n1},
                 {"n2", c.domain.n2}};
  j["initial"] = {{"preset", c.initial.preset}, {"seed", c.initial.seed},
                  {"amplitude", c.initial.amplitude}, {"decay", c.initial.decay},
                  {"kmax", c.initial.kmax},     {"theta", c.initial.theta}};
  j["run"] = {{"T", c.run.T},
              {"sample_every", c.run.sample_every},
              {"cfl_safety", c.run.cfl_safety},
              {"filter", c.run.filter},
              {"fixed_dt", c.run.fixed_dt},
              {"steady_tol", c.run.steady_tol},
              {"with_drift", c.run.with_drift}};
  j["kato"] = {{"K", c.kato.K},
               {"fd_max_order", c.kato.fd_max_order},
               {"fd_points", c.kato.fd_points},
               {"taylor_K", c.kato.taylor_K},
               {"taylor_points", c.kato.taylor_points},
               {"t_factor", c.kato.t_factor},
               {"ode_sample", c.kato.ode_sample}};
  j["constants"] = {{"c_rho", c.constants.c_rho},
                    {"C_Gamma", c.constants.C_Gamma},
                    {"C_Omega", c.constants.C_Omega},
                    {"c_r", c.constants.c_r}};
  j["output"] = c.output;
  return j;
}

GridPtr make_grid(const DomainConfig& d) {
  Domain dom = d.kind == "torus"  ? Domain::torus(d.period)
               : d.kind == "disk" ? Domain::disk(d.radius)
                                  : Domain::annulus(d.r_inner, d.r_outer);
  return Grid2D::create(dom, d.n1, d.n2);
}

DomainConstants resolve_constants(const GridPtr& g, const ConstantsConfig& o) {
  DomainConstants c;
  const bool torus = g->kind() == DomainKind::Torus;
  if (o.c_rho >= 0)
    c.c_rho = o.c_rho;
  else
    c.c_rho = torus ? 1.0 : SignedDistance(g->domain()).c_rho();
  if (o.C_Gamma >= 0)
    c.C_Gamma = o.C_Gamma;
  else if (torus)
    c.C_Gamma = std::sqrt(2.0);  // two mean constraints, Euclidean norm
  else if (g->kind() == DomainKind::Annulus)
    c.C_Gamma = g->homology_loop().length();
  else
    c.C_Gamma = 0.0;  // simply connected: no circulation constraints
  c.C_Omega = o.C_Omega >= 0 ? o.C_Omega : estimate_projection_constant(g, 12, 2026);
  c.c_r = o.c_r >= 0 ? o.c_r : estimate_regularity_constant(g, 12, 2026);
  return c;
}

nlohmann::json constants_json(const DomainConstants& c) {
  return {{"c_rho", c.c_rho}, {"C_Gamma", c.C_Gamma}, {"C_Omega", c.C_Omega}, {"c_r", c.c_r}};
}

}  // namespace aht
