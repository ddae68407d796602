#include "aht/presets.hpp"

#include <cmath>
#include <random>

#include "aht/operators.hpp"

namespace aht {

namespace {

class Gauss {
 public:
  explicit Gauss(uint64_t seed) : rng_(seed) {}
  double operator()() {
    // Box-Muller on explicit uniforms: identical streams on every platform
    double u1 = std::ldexp((double)(rng_() >> 11), -53);
    double u2 = std::ldexp((double)(rng_() >> 11), -53);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * M_PI * u2);
  }

 private:
  std::mt19937_64 rng_;
};

struct Mode {
  double k1, k2, a, b;  // a cos(k.x) + b sin(k.x)
};

std::vector<Mode> sample_modes(const GridPtr& g, const RandomFieldSpec& spec, int channel) {
  // one channel per field component so components are independent but reproducible
  Gauss gauss(spec.seed * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL * (channel + 1));
  double box = g->is_polar() ? 1.0 : 2 * M_PI / g->domain().period;
  std::vector<Mode> modes;
  for (int k1 = -spec.kmax; k1 <= spec.kmax; ++k1)
    for (int k2 = -spec.kmax; k2 <= spec.kmax; ++k2) {
      double g1 = gauss(), g2 = gauss();  // draw unconditionally: mode set independent of skips
      if (k1 == 0 && k2 == 0) continue;
      double kn = std::hypot((double)k1, (double)k2);
      double w = spec.amplitude * std::exp(-spec.decay * kn);
      modes.push_back({box * k1, box * k2, w * g1, w * g2});
    }
  return modes;
}

ScalarField synth(const GridPtr& g, const std::vector<Mode>& modes) {
  ScalarField f(g);
  for (int a = 0; a < g->n1(); ++a)
    for (int b = 0; b < g->n2(); ++b) {
      Vec2 p = g->node(a, b);
      double s = 0;
      for (const Mode& m : modes) {
        double ph = m.k1 * p.x + m.k2 * p.y;
        s += m.a * std::cos(ph) + m.b * std::sin(ph);
      }
      f(a, b) = s;
    }
  return f;
}

}  // namespace

ScalarField random_scalar(const GridPtr& g, const RandomFieldSpec& spec) {
  return synth(g, sample_modes(g, spec, 0));
}

VectorField random_vector(const GridPtr& g, const RandomFieldSpec& spec) {
  // channels 1 and 2; channel 0 belongs to random_scalar, so scalar and vector draws differ
  return VectorField(synth(g, sample_modes(g, spec, 1)), synth(g, sample_modes(g, spec, 2)));
}

VectorField make_initial(const GridPtr& g, const InitialSpec& spec) {
  RandomFieldSpec rf{spec.seed, spec.amplitude, spec.decay, spec.kmax};
  if (spec.preset == "random_smooth") return random_vector(g, rf);
  if (spec.preset == "gradient_steady") {
    return gradient(random_scalar(g, rf));
  }
  if (spec.preset == "rotation") {
    require(g->is_polar(), ErrorCode::WrongDomain, "rotation preset needs disk/annulus");
    double c = std::cos(spec.theta), s = std::sin(spec.theta);
    return VectorField(g, [&](Vec2 p) { return Vec2{c * p.x - s * p.y, s * p.x + c * p.y}; });
  }
  if (spec.preset == "ipm_embed") {
    require(!g->is_polar(), ErrorCode::WrongDomain, "ipm_embed preset needs the torus");
    ScalarField rho(g);
    if (spec.seed != 0) {
      rho = random_scalar(g, rf);
    } else {
      rho = ScalarField(g, [&](Vec2 p) {
        return spec.amplitude * (std::sin(p.x) * std::sin(p.y) + 0.3 * std::cos(p.x + 2 * p.y));
      });
    }
    ScalarField zero(g);
    ScalarField neg = rho;
    neg *= -1.0;
    return VectorField(std::move(zero), std::move(neg));
  }
  fail(ErrorCode::BadConfig, "unknown initial preset: " + spec.preset);
}

}  // namespace aht
