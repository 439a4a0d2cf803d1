#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "weylbessel/errors.hpp"
#include "weylbessel/model.hpp"
#include "weylbessel/orthopoly.hpp"
#include "weylbessel/symfun.hpp"

/**
 * \file
 * \brief Closed forms: martingale compensators and corner-start expectations.
 *
 * Type A. For the renormalized process X~ = X / sqrt(beta),
 *   f_{N,k}(x, t) = e_k(x) + sum_{l=1}^{floor(k/2)} (N-k+2l)! / (2^l l! (N-k)!) t^l e_{k-2l}(x)
 * is space-time harmonic, so E e_k(X~_t) does not depend on beta. Started at 0 it
 * therefore equals e_k(sqrt(2t) z) with z the zeros of H_N, giving
 *   E prod (y - X_t,i) = (t beta / 2)^{N/2} H_N(y / sqrt(2 beta t)).
 * Comparing coefficients with the series of H_N yields
 *   E e_{2j}(X_t) = (-1)^j (t beta / 2)^j N! / (j! (N-2j)!),   E e_{2j+1}(X_t) = 0.
 * The factor (-1)^j is forced: Ito's formula on sum X_i^2 gives
 * E e_2(X_t) = -beta N (N-1) t / 2 < 0.
 *
 * Type B. With nu_eff = nu + 1/(2 beta),
 *   e_k(x^2) + sum_{l=1}^{k} (-2t)^l binom(N-k+l, l) (N-k+nu_eff)_l e_{k-l}(x^2)
 * is space-time harmonic, and from the corner
 *   E prod (y - X_t,i^2) = (2 t beta)^N (-1)^N N! L_N^{(nu_eff-1)}(y / (2 t beta)),
 *   E e_k(X_t^2) = binom(N + nu_eff - 1, k) N! / (N-k)! (2 t beta)^k.
 */

namespace weylbessel {

/// Rising factorial x (x+1) ... (x+r-1); 1 for r = 0.
inline double pochhammer(double x, int r) {
  if (r < 0) throw ArgumentError("pochhammer: negative order");
  double p = 1.0;
  for (int i = 0; i < r; ++i) p *= x + i;
  return p;
}

inline double factorial(int n) {
  if (n < 0) throw ArgumentError("factorial: negative argument");
  return pochhammer(1.0, n);
}

/// binom(r, k) for real r: (r-k+1)_k / k!.
inline double binomial_real(double r, int k) {
  if (k < 0) return 0.0;
  return pochhammer(r - k + 1.0, k) / factorial(k);
}

namespace detail {

inline void check_order(int n, int k, int k_min, const char* who) {
  if (n < 1) throw ArgumentError(std::string(who) + ": N must be >= 1");
  if (k < k_min || k > n) {
    throw ArgumentError(std::string(who) + ": k=" + std::to_string(k) + " outside [" + std::to_string(k_min) +
                        ", N]");
  }
}

inline void check_finite_beta(double beta, const char* who) {
  if (!(beta > 0.0) || std::isinf(beta)) throw ArgumentError(std::string(who) + ": beta must be finite and positive");
}

}  // namespace detail

/// Time-corrected e_k for type A; a martingale along the renormalized process.
inline double compensator_A(int n, int k, double t, std::span<const double> x) {
  detail::check_order(n, k, 1, "compensator_A");
  if (x.size() != static_cast<std::size_t>(n)) throw ArgumentError("compensator_A: state has wrong dimension");
  const auto e = elem_sym_all(x);
  double value = e[k];
  double tl = 1.0;
  for (int l = 1; 2 * l <= k; ++l) {
    tl *= t;
    // (N-k+2l)! / (2^l l! (N-k)!)
    const double coeff = pochhammer(n - k + 1.0, 2 * l) / (std::pow(2.0, l) * factorial(l));
    value += coeff * tl * e[k - 2 * l];
  }
  return value;
}

/// Time-corrected e_k(x^2) for type B with effective parameter nu_eff.
inline double compensator_B(int n, int k, double t, std::span<const double> x, double nu_eff) {
  detail::check_order(n, k, 1, "compensator_B");
  if (x.size() != static_cast<std::size_t>(n)) throw ArgumentError("compensator_B: state has wrong dimension");
  const auto e = elem_sym_all(squared(x));
  double value = e[k];
  double power = 1.0;
  for (int l = 1; l <= k; ++l) {
    power *= -2.0 * t;
    value += power * binomial_real(n - k + l, l) * pochhammer(n - k + nu_eff, l) * e[k - l];
  }
  return value;
}

/// Compensator for the given model (normalized coordinates).
inline double compensator(const ModelSpec& spec, int n, int k, double t, std::span<const double> x) {
  return spec.system() == RootSystem::A ? compensator_A(n, k, t, x) : compensator_B(n, k, t, x, spec.nu_eff());
}

/// E prod_i (y - X_t,i) for the type-A process started at 0.
inline double expected_charpoly_A(int n, double beta, double t, double y) {
  detail::check_finite_beta(beta, "expected_charpoly_A");
  if (!(t > 0.0)) throw ArgumentError("expected_charpoly_A: t must be positive");
  return std::pow(t * beta / 2.0, n / 2.0) * hermite_eval(n, y / std::sqrt(2.0 * beta * t));
}

/// Coefficients in y of expected_charpoly_A, via the coefficient expansion of H_N.
inline PolyCoeffs expected_charpoly_A_coeffs(int n, double beta, double t) {
  detail::check_finite_beta(beta, "expected_charpoly_A_coeffs");
  if (!(t > 0.0)) throw ArgumentError("expected_charpoly_A_coeffs: t must be positive");
  auto h = hermite_coeffs(n);
  const double pref = std::pow(t * beta / 2.0, n / 2.0);
  const double inv_scale = 1.0 / std::sqrt(2.0 * beta * t);
  for (std::size_t j = 0; j < h.coeffs.size(); ++j) h.coeffs[j] *= pref * std::pow(inv_scale, static_cast<double>(j));
  return h;
}

/// E prod_i (y - X_t,i) for type A started at sqrt(beta) c z (normalized start c z, z Hermite zeros).
inline double expected_charpoly_A_ray(int n, double beta, double t, double c, double y) {
  detail::check_finite_beta(beta, "expected_charpoly_A_ray");
  const double s = 2.0 * t + c * c;
  if (!(s > 0.0)) throw ArgumentError("expected_charpoly_A_ray: 2t + c^2 must be positive");
  return std::pow(s * beta / 4.0, n / 2.0) * hermite_eval(n, y / std::sqrt(s * beta));
}

/// E e_k(X_t) for type A from the corner (sign-corrected even moments, zero odd moments).
inline double expected_elem_sym_A(int n, double beta, double t, int k) {
  detail::check_order(n, k, 0, "expected_elem_sym_A");
  detail::check_finite_beta(beta, "expected_elem_sym_A");
  if (k % 2 == 1) return 0.0;
  const int j = k / 2;
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(t * beta / 2.0, j) * factorial(n) / (factorial(j) * factorial(n - 2 * j));
}

/// E prod_i (y - X_t,i^2) for type B from the corner.
inline double expected_charpoly_B(int n, double beta, double nu, double t, double y) {
  detail::check_finite_beta(beta, "expected_charpoly_B");
  if (!(t > 0.0)) throw ArgumentError("expected_charpoly_B: t must be positive");
  const double nu_eff = nu + 0.5 / beta;
  if (!(nu_eff > 0.0)) throw ArgumentError("expected_charpoly_B: nu + 1/(2 beta) must be positive");
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double s = 2.0 * t * beta;
  return std::pow(s, n) * sign * factorial(n) * laguerre_eval(n, nu_eff - 1.0, y / s);
}

inline PolyCoeffs expected_charpoly_B_coeffs(int n, double beta, double nu, double t) {
  detail::check_finite_beta(beta, "expected_charpoly_B_coeffs");
  if (!(t > 0.0)) throw ArgumentError("expected_charpoly_B_coeffs: t must be positive");
  const double nu_eff = nu + 0.5 / beta;
  if (!(nu_eff > 0.0)) throw ArgumentError("expected_charpoly_B_coeffs: nu + 1/(2 beta) must be positive");
  auto l = laguerre_coeffs(n, nu_eff - 1.0);
  const double s = 2.0 * t * beta;
  const double pref = std::pow(s, n) * ((n % 2 == 0) ? 1.0 : -1.0) * factorial(n);
  for (std::size_t j = 0; j < l.coeffs.size(); ++j) l.coeffs[j] *= pref * std::pow(s, -static_cast<double>(j));
  return l;
}

/// E e_k(X_t^2) for type B from the corner.
inline double expected_elem_sym_B(int n, double beta, double nu, double t, int k) {
  detail::check_order(n, k, 0, "expected_elem_sym_B");
  detail::check_finite_beta(beta, "expected_elem_sym_B");
  const double nu_eff = nu + 0.5 / beta;
  return binomial_real(n + nu_eff - 1.0, k) * factorial(n) / factorial(n - k) * std::pow(2.0 * t * beta, k);
}

/// beta -> 0 limit of expected_elem_sym_B: reflected Brownian motion on the type-B chamber.
/// Coordinates are independent with E X_i^2 = t, so E e_k(X_t^2) = t^k binom(N, k).
/// (This is also the limit of binom(N + nu + 1/(2 beta) - 1, k) N!/(N-k)! (2 t beta)^k; a
/// factor 2^k that sometimes appears in statements of this limit is spurious.)
inline double expected_elem_sym_B_beta0(int n, double t, int k) {
  detail::check_order(n, k, 0, "expected_elem_sym_B_beta0");
  return std::pow(t, k) * binomial_real(n, k);
}

/// E prod (y - X_t,i) for a type-B Dunkl process from 0: its law is invariant under
/// coordinate sign changes, so all e_k with k >= 1 vanish and the answer is y^N.
/// Recorded as an identity; Dunkl jump dynamics are not simulated.
inline double expected_charpoly_dunkl_B(int n, double y) { return std::pow(y, n); }

}  // namespace weylbessel
