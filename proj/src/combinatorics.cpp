#include "aht/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "aht/symbolic.hpp"

namespace aht {

namespace {

Coeff factorial(int n) {
  Coeff f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Coeff int_pow(int base, int e) {
  Coeff p = 1;
  for (int i = 0; i < e; ++i) p *= base;
  return p;
}

}  // namespace

Rational upsilon_sum(int s, int m) {
  require(s >= 1 && m >= 0, ErrorCode::InvalidArgument, "upsilon_sum needs s >= 1, m >= 0");
  // U(1, m) = 1/(1+m)^2; U(s, m) = sum_{a=0}^m 1/(1+a)^2 U(s-1, m-a)
  std::vector<Rational> row(static_cast<size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) row[j] = Rational(1, Coeff(j + 1) * (j + 1));
  for (int depth = 2; depth <= s; ++depth) {
    std::vector<Rational> next(static_cast<size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) {
      Rational acc = 0;
      for (int a = 0; a <= j; ++a) acc += row[j - a] / (Rational(Coeff(a + 1) * (a + 1)));
      next[j] = acc;
    }
    row = std::move(next);
  }
  return row[static_cast<size_t>(m)];
}

bool upsilon_bound_holds(int s, int m) {
  // upsilon_sum(s, m) * (m+1)^2 <= 20^s, compared exactly
  return upsilon_sum(s, m) * (Coeff(m + 1) * (m + 1)) <= Rational(int_pow(20, s));
}

BoundCertificate certify_coefficient_bounds(int series_kmax, int kernel_kmax) {
  require(series_kmax >= 1 && kernel_kmax >= 1, ErrorCode::InvalidArgument,
          "certificate orders must be >= 1");
  BoundCertificate cert;
  cert.series_order = series_kmax;
  cert.kernel_order = kernel_kmax;
  bool ok = true;

  auto check = [&](const Coeff& weight, const Coeff& budget) {
    ++cert.terms_checked;
    if (weight > budget) ok = false;
    if (weight == budget) ++cert.tight_terms;
  };

  for (int k = 1; k <= series_kmax; ++k) {
    const Coeff budget = factorial(k);

    for (const auto& [key, c] : divergence_series(k).terms) {
      Coeff w = abs(c);
      for (int j : key.js) w *= factorial(j);
      check(w, budget);
    }
    for (const auto& [key, c] : vorticity_series(k).terms) {
      Coeff w = abs(c);
      for (int j : key.js) w *= factorial(j);
      check(w, budget);
    }
    for (const auto& [key, c] : boundary_flux_series(k).terms) {
      Coeff w = abs(c);
      for (int a : key.args) w *= factorial(a);
      w *= factorial(static_cast<int>(key.args.size()) - 1);
      check(w, budget);
    }
  }

  // kernel weights must reproduce Pascal's triangle exactly
  std::vector<Coeff> pascal{1};
  for (int k = 1; k <= kernel_kmax; ++k) {
    std::vector<Coeff> next(static_cast<size_t>(k) + 1, 1);
    for (int r = 1; r < k; ++r) next[r] = pascal[r - 1] + pascal[r];
    pascal = std::move(next);
    const auto got = loop_kernel_coefficients(k);
    if (got.size() != pascal.size()) {
      ok = false;
      continue;
    }
    for (size_t r = 0; r < got.size(); ++r) check(abs(got[r]), pascal[r]);
  }

  cert.ok = ok;
  return cert;
}

double loop_sum_value(int k) {
  require(k >= 1, ErrorCode::InvalidArgument, "loop_sum_value needs k >= 1");
  double s = 0.0;
  for (int r = 1; r <= k; ++r) {
    const double a = static_cast<double>(r);
    const double b = static_cast<double>(k - r + 1);
    s += (k + 1.0) * (k + 1.0) / (a * a * a * b * b);
  }
  return s;
}

namespace {

// slightly rounded-up zeta values keep the analytic tail bounds honest upper bounds
constexpr double kZeta3Up = 1.2020569032;
constexpr double kZeta2Up = 1.6449340669;

// upper bound for loop_sum_value(k) valid for every k > K (pieces are decreasing in k):
//   r <= sqrt(k):      ((k+1)/(k-sqrt(k)+1))^2 * zeta(3)
//   sqrt(k) < r <= k/2: 4 * sum_{r > sqrt(k)} r^-3   <= 2/(sqrt(k)-1)^2
//   r > k/2:           8/(k+1) * zeta(2)
double loop_sum_tail_bound(int K) {
  const double k = K + 1.0;
  const double rk = std::sqrt(k);
  const double piece1 = (k + 1.0) / (k - rk + 1.0);
  return piece1 * piece1 * kZeta3Up + 2.0 / ((rk - 1.0) * (rk - 1.0)) + 8.0 * kZeta2Up / (k + 1.0);
}

void validate_constants(const DomainConstants& c) {
  require(c.c_rho >= 1.0 && std::isfinite(c.c_rho), ErrorCode::InvalidArgument, "c_rho must be >= 1");
  require(c.C_Omega > 0.0 && std::isfinite(c.C_Omega), ErrorCode::InvalidArgument,
          "C_Omega must be positive");
  require(c.c_r > 0.0 && std::isfinite(c.c_r), ErrorCode::InvalidArgument, "c_r must be positive");
  require(c.C_Gamma >= 0.0 && std::isfinite(c.C_Gamma), ErrorCode::InvalidArgument,
          "C_Gamma must be >= 0");
}

constexpr int kGammaDirectK = 1000;

}  // namespace

double gamma_value(double L, const DomainConstants& c) {
  validate_constants(c);
  require(L > 0.0 && std::isfinite(L), ErrorCode::InvalidArgument, "L must be positive");
  const double inf = std::numeric_limits<double>::infinity();

  // vorticity absorption needs L C_Omega > 1; the derivative-competition sum needs q < 1
  if (L * c.C_Omega <= 1.0) return inf;
  const double q = 20.0 * c.c_rho / L;
  if (q >= 1.0) return inf;

  const double pref_loop = c.C_Gamma * (c.C_Omega + 1.0) / (c.C_Omega * L);

  double best = 0.0;
  for (int k = 1; k <= kGammaDirectK; ++k) {
    double a = 0.0;
    double qs = q;  // q^s tracked incrementally
    for (int s = 2; s <= k + 1; ++s) {
      qs *= q;
      const double ratio = (k + 1.0) / (k + 2.0 - s);
      a += s * qs * ratio * ratio;
    }
    best = std::max(best, 4.0 * L * a + pref_loop * loop_sum_value(k));
  }

  // tail over k > kGammaDirectK:
  //   (k+1)/(k+2-s) <= s turns the interior sum into sum_{s>=2} s^3 q^s,
  //   with closed form q(1+4q+q^2)/(1-q)^4 minus the s=1 term
  const double interior_tail =
      4.0 * L * (q * (1.0 + 4.0 * q + q * q) / std::pow(1.0 - q, 4) - q);
  const double loop_tail = pref_loop * loop_sum_tail_bound(kGammaDirectK);
  return std::max(best, interior_tail + loop_tail);
}

double find_admissible_L(const DomainConstants& c) {
  validate_constants(c);
  const double floor_L = std::max(20.0 * c.c_rho, 1.0 / c.C_Omega);
  const double target = 1.0 / c.c_r;

  double L = floor_L * (1.0 + 1e-7);
  if (gamma_value(L, c) <= target) return L;

  double bad = L;
  int doublings = 0;
  while (gamma_value(L, c) > target) {
    bad = L;
    L *= 2.0;
    if (++doublings > 400 || L > 1e300)
      fail(ErrorCode::NotFound, "no admissible L below overflow: budget never reaches 1/c_r");
  }

  // tighten to ~1% between the last failing and the first passing L
  for (int it = 0; it < 60 && (L - bad) > 0.01 * bad; ++it) {
    const double mid = 0.5 * (bad + L);
    (gamma_value(mid, c) <= target ? L : bad) = mid;
  }
  return L;
}

double taylor_radius_bound(double L, const DomainConstants& c, double y_norm) {
  validate_constants(c);
  require(L > 0.0 && std::isfinite(L), ErrorCode::InvalidArgument, "L must be positive");
  require(y_norm > 0.0 && std::isfinite(y_norm), ErrorCode::InvalidArgument,
          "field size must be positive");
  require(gamma_value(L, c) <= 1.0 / c.c_r, ErrorCode::LTooSmall,
          "L does not satisfy the budget inequality; radius bound would be vacuous");
  return 1.0 / (c.C_Omega * L * y_norm);
}

}  // namespace aht
