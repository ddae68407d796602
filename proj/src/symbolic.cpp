#include "aht/symbolic.hpp"

#include <algorithm>
#include <sstream>

namespace aht {

void MatExpr::add(const MatKey& k, const Coeff& c) {
  auto it = terms.find(k);
  if (it == terms.end()) {
    if (c != 0) terms.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms.erase(it);
}

void RhoExpr::add(const RhoKey& k, const Coeff& c) {
  auto it = terms.find(k);
  if (it == terms.end()) {
    if (c != 0) terms.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms.erase(it);
}

void KernelExpr::add(const KernelKey& k, const Coeff& c) {
  auto it = terms.find(k);
  if (it == terms.end()) {
    if (c != 0) terms.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms.erase(it);
}

// --- material derivative, term by term ------------------------------------------------------

MatExpr material_derivative_raw(const MatExpr& e) {
  MatExpr out;
  out.bridge = e.bridge;
  for (const auto& [key, c] : e.terms) {
    if (key.lead_grad_y) {
      // D grad y = -grad y . grad u: a grad-u factor appears right after grad y
      MatKey k = key;
      k.js.insert(k.js.begin(), 0);
      out.add(k, -c);
    }
    for (size_t i = 0; i < key.js.size(); ++i) {
      // D grad D^j u = grad D^(j+1) u - grad D^j u . grad u
      MatKey up = key;
      up.js[i] += 1;
      out.add(up, c);
      MatKey chain = key;
      chain.js.insert(chain.js.begin() + i + 1, 0);
      out.add(chain, -c);
    }
  }
  return out;
}

RhoExpr material_derivative(const RhoExpr& e) {
  RhoExpr out;
  for (const auto& [key, c] : e.terms) {
    // rho is static, so D grad^s rho{v..} = grad^(s+1) rho{u, v..} + sum_i grad^s rho{.., Dv_i, ..}
    RhoKey widened = key;
    widened.args.insert(widened.args.begin(), 0);
    out.add(widened, c);
    for (size_t i = 0; i < key.args.size(); ++i) {
      RhoKey bumped = key;
      bumped.args[i] += 1;
      out.add(bumped, c);
    }
  }
  return out;
}

MatExpr cyclic_canonicalize(const MatExpr& e) {
  MatExpr out;
  out.bridge = e.bridge;
  for (const auto& [key, c] : e.terms) {
    MatKey k = key;
    // the trace is invariant under cyclic rotation; grad y stays anchored in front, and the
    // asym bridge is not cyclic, so only pure trace products get rotated
    if (e.bridge == Bridge::Trace && !k.lead_grad_y && k.js.size() >= 2) {
      std::vector<int> best = k.js;
      std::vector<int> rot = k.js;
      for (size_t r = 1; r < k.js.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
      }
      k.js = best;
    }
    out.add(k, c);
  }
  return out;
}

MatExpr material_derivative(const MatExpr& e) { return cyclic_canonicalize(material_derivative_raw(e)); }

// --- series ---------------------------------------------------------------------------------

MatExpr divergence_series(int k) {
  require(k >= 0 && k <= kMaxSeriesOrder, ErrorCode::OrderTooLarge, "divergence series order out of range");
  MatExpr e;  // div u = 0: empty sum
  e.bridge = Bridge::Trace;
  for (int j = 0; j < k; ++j) {
    e = material_derivative_raw(e);
    MatKey gain;
    gain.js = {j, 0};  // tr{grad D^j u . grad u}, the projector commutator at this level
    e.add(gain, 1);
  }
  return e;
}

MatExpr vorticity_series(int k) {
  require(k >= 0 && k <= kMaxSeriesOrder, ErrorCode::OrderTooLarge, "vorticity series order out of range");
  MatExpr e;
  e.bridge = Bridge::Asym;
  MatKey base;
  base.lead_grad_y = true;  // curl u = curl y = as{grad y}
  e.add(base, 1);
  for (int j = 0; j < k; ++j) {
    e = material_derivative_raw(e);
    MatKey gain;
    gain.js = {j, 0};
    e.add(gain, 1);
  }
  return e;
}

RhoExpr boundary_flux_series(int k) {
  require(k >= 1 && k <= kMaxSeriesOrder, ErrorCode::OrderTooLarge, "boundary series order out of range");
  RhoExpr e;
  RhoKey seed;
  seed.args = {0};  // u . grad rho = grad rho{u}, identically zero on the boundary
  e.add(seed, 1);
  for (int j = 0; j < k; ++j) e = material_derivative(e);

  // isolate grad rho{D^k u}: its weight must be exactly one for the solve to be a solve
  RhoKey top;
  top.args = {k};
  auto it = e.terms.find(top);
  require(it != e.terms.end() && it->second == 1, ErrorCode::MissingFactor,
          "boundary series lost its leading term");
  RhoExpr out;
  for (const auto& [key, c] : e.terms)
    if (key.args != top.args) out.add(key, -c);
  return out;
}

namespace {
KernelExpr kernel_step(const KernelExpr& e) {
  KernelExpr out;
  for (const auto& [key, c] : e.terms) {
    // D part: push the flux derivative ...
    KernelKey dp = key;
    dp.psi += 1;
    out.add(dp, c);
    // ... and differentiate each transposed jacobian: D (grad D^m u)^T =
    // (grad D^(m+1) u)^T - (grad u)^T (grad D^m u)^T
    for (size_t i = 0; i < key.mats.size(); ++i) {
      KernelKey up = key;
      up.mats[i] += 1;
      out.add(up, c);
      KernelKey chain = key;
      chain.mats.insert(chain.mats.begin() + i, 0);
      out.add(chain, -c);
    }
    // transport of the loop element contributes (grad u)^T w
    KernelKey g = key;
    g.mats.insert(g.mats.begin(), 0);
    out.add(g, c);
  }
  return out;
}
}  // namespace

KernelExpr loop_kernel_series(int k) {
  require(k >= 1 && k <= kMaxKernelOrder, ErrorCode::OrderTooLarge, "loop kernel order out of range");
  KernelExpr e;
  KernelKey seed;  // psi itself: a gradient, so its loop integral vanishes
  e.add(seed, 1);
  for (int j = 0; j < k; ++j) {
    e = kernel_step(e);
    // the chained (grad u)^T insertions cancel against the transport term pairwise; if that
    // ever stopped happening the closed form downstream would be wrong, so hard-stop here
    for (const auto& [key, c] : e.terms)
      require(key.mats.size() <= 1, ErrorCode::WrongShape, "loop kernel failed to stay first-order");
  }
  return e;
}

std::vector<Coeff> loop_kernel_coefficients(int k) {
  KernelExpr e = loop_kernel_series(k);
  std::vector<Coeff> c(k + 1, 0);
  for (const auto& [key, w] : e.terms) {
    if (key.mats.empty()) {
      require(key.psi == k, ErrorCode::WrongShape, "unexpected bare flux term");
      c[0] = w;
    } else {
      int r = key.mats[0] + 1;
      require(key.psi == k - r, ErrorCode::WrongShape, "inhomogeneous loop kernel term");
      c[r] = w;
    }
  }
  return c;
}

int mat_term_order(const MatKey& k) {
  int s = k.lead_grad_y ? 1 : 0;
  for (int j : k.js) s += j + 1;
  return s;
}

int rho_term_order(const RhoKey& k) {
  int s = 0;
  for (int a : k.args) s += a + 1;
  return s;
}

// --- display --------------------------------------------------------------------------------

namespace {
std::string du_name(int j) {
  if (j == 0) return "u";
  if (j == 1) return "Du";
  return "D" + std::to_string(j) + "u";
}
std::string gdu_name(int j) { return "g" + du_name(j); }

void append_coeff(std::ostringstream& os, bool first, const Coeff& c) {
  Coeff a = c < 0 ? Coeff(-c) : c;
  if (first)
    os << (c < 0 ? "-" : "");
  else
    os << (c < 0 ? " - " : " + ");
  if (a != 1) os << a.str() << " ";
}
}  // namespace

std::string to_string(const MatExpr& e) {
  if (e.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : e.terms) {
    append_coeff(os, first, c);
    first = false;
    os << (e.bridge == Bridge::Trace ? "tr{" : "as{");
    bool dot = false;
    if (key.lead_grad_y) {
      os << "gy";
      dot = true;
    }
    for (int j : key.js) {
      if (dot) os << ".";
      os << gdu_name(j);
      dot = true;
    }
    os << "}";
  }
  return os.str();
}

std::string to_string(const RhoExpr& e) {
  if (e.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : e.terms) {
    append_coeff(os, first, c);
    first = false;
    os << "d" << key.args.size() << "rho{";
    for (size_t i = 0; i < key.args.size(); ++i) {
      if (i) os << ",";
      os << du_name(key.args[i]);
    }
    os << "}";
  }
  return os.str();
}

std::string to_string(const KernelExpr& e) {
  if (e.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : e.terms) {
    append_coeff(os, first, c);
    first = false;
    for (int m : key.mats) os << gdu_name(m) << "^T.";
    if (key.psi == 0)
      os << "psi";
    else if (key.psi == 1)
      os << "Dpsi";
    else
      os << "D" << key.psi << "psi";
  }
  return os.str();
}

}  // namespace aht
