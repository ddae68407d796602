#pragma once
#include <boost/multiprecision/cpp_int.hpp>

#include "aht/errors.hpp"

namespace aht {

using Rational = boost::multiprecision::cpp_rational;

// --- exact composition sums ------------------------------------------------------------------
// upsilon_sum(s, m) = sum over alpha in N^s with |alpha| = m of prod_i 1/(1+alpha_i)^2,
// evaluated in exact rational arithmetic
Rational upsilon_sum(int s, int m);
// the workhorse inequality upsilon_sum(s,m) <= 20^s/(m+1)^2, checked exactly
bool upsilon_bound_holds(int s, int m);

// --- coefficient certification ---------------------------------------------------------------
// Exact integer verification that every derived weight sits under its factorial budget:
//   interior products   |c| * prod_i j_i!            <= k!
//   boundary tensors    |c| * prod_i a_i! * (s-1)!   <= k!
//   loop kernel         c_{k,r} == C(k,r)            (elementwise)
// for all k up to the requested orders.
struct BoundCertificate {
  int series_order = 0;
  int kernel_order = 0;
  long long terms_checked = 0;
  long long tight_terms = 0;  // budget met with equality
  bool ok = false;
};
BoundCertificate certify_coefficient_bounds(int series_kmax, int kernel_kmax);

// --- the smallness function gamma ------------------------------------------------------------
// Domain-dependent constants feeding the induction budget.
struct DomainConstants {
  double c_rho = 1.0;    // boundary-distance derivative growth, >= 1
  double C_Gamma = 0.0;  // l2 size of the homology loop lengths (0 when there are none)
  double C_Omega = 1.0;  // projection norm bound
  double c_r = 1.0;      // div/curl/trace/circulation reconstruction constant
};

// Certified upper bound for
//   sup_{k>=1} { 4 sum_{s=2}^{k+1} s c_rho^s L^{1-s} (k+1)^2 20^s / (k+2-s)^2
//                + C_Gamma (C_Omega+1)/(C_Omega L) sum_{r=1}^k (k+1)^2/(r^3 (k-r+1)^2) }.
// Small k are evaluated directly; the infinite tail is dominated through
// (k+1)/(k+2-s) <= s and the closed form sum_s s^3 q^s, q = 20 c_rho / L. Returns +inf when
// q >= 1 or L C_Omega <= 1 (the sup genuinely diverges / the absorption step fails there).
double gamma_value(double L, const DomainConstants& c);

// smallest L (up to ~1% bisection slack) with L > max(20 c_rho, 1/C_Omega) and
// gamma_value(L) <= 1/c_r; the budget decays like 1/L so doubling always exits
double find_admissible_L(const DomainConstants& c);

// convergence-radius bound for the time-Taylor series of the flow map at field size |y|:
// derivative ladder growth k! (C_Omega L)^k |y|^k gives radius 1/(C_Omega L |y|)
double taylor_radius_bound(double L, const DomainConstants& c, double y_norm);

// uniform bound for the loop sum sum_{r=1}^k (k+1)^2/(r^3(k-r+1)^2): certified constant,
// attained at k = 1 (the derivation tool prints the direct scan and the tail argument)
inline constexpr double kLoopSumBound = 4.0;
double loop_sum_value(int k);  // the sum itself, for scans and the derivation tool

}  // namespace aht
