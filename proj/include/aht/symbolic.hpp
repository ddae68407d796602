#pragma once
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aht/errors.hpp"

namespace aht {

using Coeff = boost::multiprecision::cpp_int;

// ============================================================================================
// Exact symbolic layer for iterated material derivatives D = d_t + u.grad along solutions of
// the transport system  D y = 0,  u = P y.  Everything closes over a tiny factor alphabet:
//
//   grad y             (Dy = 0        =>  D grad y     = -grad y . grad u)
//   grad D^j u         (definition    =>  D grad D^j u =  grad D^(j+1) u - grad D^j u . grad u)
//   D^j u              (definition    =>  D D^j u      =  D^(j+1) u)
//   grad^s rho slots   (rho static    =>  D grad^s rho{v..} = grad^(s+1) rho{u, v..}
//                                                            + sum_i grad^s rho{.., Dv_i, ..})
//
// Coefficients are exact integers; merging happens on the *ordered* factor sequence, which is
// the bookkeeping the coefficient bounds are stated for. A separate trace-cyclic quotient is
// provided for display and for cross-checking hand calculations.
// ============================================================================================

enum class Bridge { Trace, Asym };  // tr{M1..Mm} or as{M1..Mm} = (M)_21 - (M)_12

// one matrix product under tr{} or as{}: optional leading grad-y factor, then grad D^j u's
struct MatKey {
  bool lead_grad_y = false;
  std::vector<int> js;  // ordered: js[i] = j of the (i+1)-th grad D^j u factor
  bool operator<(const MatKey& o) const {
    if (lead_grad_y != o.lead_grad_y) return lead_grad_y < o.lead_grad_y;
    return js < o.js;
  }
};

// fully contracted boundary tensor grad^s rho{D^(a_1) u, .., D^(a_s) u}, s = args.size()
struct RhoKey {
  std::vector<int> args;
  bool operator<(const RhoKey& o) const { return args < o.args; }
};

// transposed-jacobian chain acting on a flux derivative:
//   (grad D^(m_1) u)^T .. (grad D^(m_q) u)^T  D^(psi) psi,  psi = y - u
struct KernelKey {
  std::vector<int> mats;
  int psi = 0;
  bool operator<(const KernelKey& o) const {
    if (mats != o.mats) return mats < o.mats;
    return psi < o.psi;
  }
};

struct MatExpr {
  Bridge bridge = Bridge::Trace;
  std::map<MatKey, Coeff> terms;
  void add(const MatKey& k, const Coeff& c);
};
struct RhoExpr {
  std::map<RhoKey, Coeff> terms;
  void add(const RhoKey& k, const Coeff& c);
};
struct KernelExpr {
  std::map<KernelKey, Coeff> terms;
  void add(const KernelKey& k, const Coeff& c);
};

// --- rewrite engines ------------------------------------------------------------------------
// raw material derivative: ordered-sequence merging only
MatExpr material_derivative_raw(const MatExpr& e);
RhoExpr material_derivative(const RhoExpr& e);

// quotient by trace cyclicity (rotates each pure grad-D^j-u product under tr{} to its least
// rotation; asym products and grad-y-anchored products are left alone)
MatExpr cyclic_canonicalize(const MatExpr& e);

// canonicalized material derivative, the form hand calculations are usually written in
MatExpr material_derivative(const MatExpr& e);

// --- derived series -------------------------------------------------------------------------
// interior identities, valid for k >= 0 (k = 0 gives the empty sum / as{grad y}):
//   divergence_series(k):  div D^k u  as  sum c tr{..}          (all factors grad D^j u)
//   vorticity_series(k):   curl D^k u as  sum c as{..}          (optionally one leading grad y)
MatExpr divergence_series(int k);
MatExpr vorticity_series(int k);

// boundary identity: grad rho{D^k u} = boundary_flux_series(k) on the (static) boundary,
// obtained by expanding D^k(u . grad rho) = 0 and isolating the top term; k >= 1
RhoExpr boundary_flux_series(int k);

// loop identity: the circulation of D^k psi + loop_kernel_series(k) vanishes on loops that
// stay in a fixed homology class, psi = y - u; k >= 1. After merging, every surviving term
// carries at most one transposed jacobian factor; the generator checks that collapse.
KernelExpr loop_kernel_series(int k);
// the k+1 integer weights of loop_kernel_series, index r = 0..k holding the coefficient of
// (grad D^(r-1) u)^T D^(k-r) psi (r = 0 is the bare D^k psi term, weight always 1)
std::vector<Coeff> loop_kernel_coefficients(int k);

// homogeneity degree carried by each factor list (every D and every gradient costs one order);
// the series above are homogeneous, which the tests pin down
int mat_term_order(const MatKey& k);
int rho_term_order(const RhoKey& k);

// display forms, e.g. "2 tr{gDu.gu} - 2 tr{gu.gu.gu}"
std::string to_string(const MatExpr& e);
std::string to_string(const RhoExpr& e);
std::string to_string(const KernelExpr& e);

inline constexpr int kMaxSeriesOrder = 8;    // interior/boundary series cap
inline constexpr int kMaxKernelOrder = 24;   // loop kernel cap

}  // namespace aht
