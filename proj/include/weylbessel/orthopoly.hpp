#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "weylbessel/errors.hpp"
#include "weylbessel/symfun.hpp"

/**
 * \file
 * \brief Hermite H_N (physicists' convention) and generalized Laguerre L_N^(alpha):
 * evaluation, coefficient expansion and ordered zeros.
 *
 * Note on the series form of H_N: the alternating sum runs over j = 0..floor(N/2).
 */

namespace weylbessel {

inline constexpr int kMaxDegree = 200;

enum class PolyFamily { Hermite, Laguerre };

/// Zeros of H_N or L_N^(alpha) in strictly decreasing order.
struct ZeroSet {
  std::vector<double> zeros;
  PolyFamily family = PolyFamily::Hermite;
  int degree = 0;
  double alpha = 0.0;  // Laguerre only
};

namespace detail {

inline void check_degree(int n, int min_degree, const char* who) {
  if (n < min_degree || n > kMaxDegree) {
    throw ArgumentError(std::string(who) + ": degree " + std::to_string(n) + " outside [" +
                        std::to_string(min_degree) + ", " + std::to_string(kMaxDegree) + "]");
  }
}

inline void check_alpha(double alpha, const char* who) {
  if (!(alpha > -1.0)) throw ArgumentError(std::string(who) + ": alpha must exceed -1");
}

// Monic three-term recurrence p_{n+1} = (x - a_n) p_n - b_n p_{n-1}, with b_n > 0 for n >= 1.
struct MonicRecurrence {
  std::vector<double> a;  // a_0..a_{N-1}
  std::vector<double> b;  // b_0 unused, b_1..b_{N-1}
};

inline MonicRecurrence hermite_recurrence(int n) {
  MonicRecurrence r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (int j = 1; j < n; ++j) r.b[j] = 0.5 * j;
  return r;
}

inline MonicRecurrence laguerre_recurrence(int n, double alpha) {
  MonicRecurrence r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (int j = 0; j < n; ++j) r.a[j] = 2.0 * j + alpha + 1.0;
  for (int j = 1; j < n; ++j) r.b[j] = j * (j + alpha);
  return r;
}

// Newton ratio p_N(x)/p_N'(x) from the monic recurrence. The pair (p, p') is
// rescaled jointly whenever it grows large, which leaves the ratio unchanged.
inline double newton_ratio(const MonicRecurrence& r, double x) {
  const std::size_t n = r.a.size();
  double p_prev = 0.0, p = 1.0;
  double d_prev = 0.0, d = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double bj = j == 0 ? 0.0 : r.b[j];
    const double p_next = (x - r.a[j]) * p - bj * p_prev;
    const double d_next = p + (x - r.a[j]) * d - bj * d_prev;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    const double mag = std::max(std::abs(p), std::abs(d));
    if (mag > 1e150) {
      p /= mag;
      p_prev /= mag;
      d /= mag;
      d_prev /= mag;
    }
  }
  return p / d;
}

// Eigenvalues of the symmetric Jacobi matrix, descending, each polished by one Newton step.
inline std::vector<double> jacobi_zeros(const MonicRecurrence& r) {
  const auto n = static_cast<Eigen::Index>(r.a.size());
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = r.a[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) sub(i) = std::sqrt(r.b[static_cast<std::size_t>(i + 1)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> zeros(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (auto& z : zeros) {
    const double step = newton_ratio(r, z);
    if (std::isfinite(step)) z -= step;
  }
  std::sort(zeros.begin(), zeros.end(), std::greater<>());
  return zeros;
}

}  // namespace detail

/// H_N(x) by the three-term recurrence H_{n+1} = 2x H_n - 2n H_{n-1}.
inline double hermite_eval(int n, double x) {
  detail::check_degree(n, 0, "hermite_eval");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int j = 1; j < n; ++j) {
    const double next = 2.0 * x * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// H_N(x) by the explicit alternating series; used for cross-checks at small N.
inline double hermite_eval_series(int n, double x) {
  detail::check_degree(n, 0, "hermite_eval_series");
  // N!/(j!(N-2j)!) 2^{N-2j}, updated term by term.
  double coeff = std::pow(2.0, n);
  double sum = 0.0;
  for (int j = 0; 2 * j <= n; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * coeff * std::pow(x, n - 2 * j);
    // ratio of consecutive coefficients: (N-2j)(N-2j-1) / ((j+1) * 4)
    coeff *= static_cast<double>(n - 2 * j) * static_cast<double>(n - 2 * j - 1) / (4.0 * (j + 1));
  }
  return sum;
}

/// L_N^(alpha)(x) by the recurrence (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}.
inline double laguerre_eval(int n, double alpha, double x) {
  detail::check_degree(n, 0, "laguerre_eval");
  detail::check_alpha(alpha, "laguerre_eval");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// L_N^(alpha)(x) by the explicit series sum_k binom(N+alpha, N-k) (-x)^k / k!.
inline double laguerre_eval_series(int n, double alpha, double x) {
  detail::check_degree(n, 0, "laguerre_eval_series");
  detail::check_alpha(alpha, "laguerre_eval_series");
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    // binom(N+alpha, N-k) = prod_{i=1}^{N-k} (k+alpha+i) / i
    double binom = 1.0;
    for (int i = 1; i <= n - k; ++i) binom *= (k + alpha + i) / i;
    double term = binom;
    for (int i = 1; i <= k; ++i) term *= -x / i;
    sum += term;
  }
  return sum;
}

/// Coefficients of H_N in powers of x (recurrence on coefficient vectors).
inline PolyCoeffs hermite_coeffs(int n) {
  detail::check_degree(n, 0, "hermite_coeffs");
  std::vector<double> prev{1.0};
  if (n == 0) return {prev};
  std::vector<double> cur{0.0, 2.0};
  for (int j = 1; j < n; ++j) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= 2.0 * j * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {cur};
}

/// Coefficients of L_N^(alpha) in powers of x.
inline PolyCoeffs laguerre_coeffs(int n, double alpha) {
  detail::check_degree(n, 0, "laguerre_coeffs");
  detail::check_alpha(alpha, "laguerre_coeffs");
  std::vector<double> prev{1.0};
  if (n == 0) return {prev};
  std::vector<double> cur{1.0 + alpha, -1.0};
  for (int j = 1; j < n; ++j) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i] += (2.0 * j + 1.0 + alpha) * cur[i];
      next[i + 1] -= cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= (j + alpha) * prev[i];
    for (auto& c : next) c /= (j + 1.0);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {cur};
}

inline ZeroSet hermite_zeros(int n) {
  detail::check_degree(n, 1, "hermite_zeros");
  ZeroSet out{detail::jacobi_zeros(detail::hermite_recurrence(n)), PolyFamily::Hermite, n, 0.0};
  // H_N has parity (-1)^N: symmetrize the pairs and pin the middle zero for odd N.
  for (int i = 0; i < n / 2; ++i) {
    const double m = 0.5 * (out.zeros[i] - out.zeros[n - 1 - i]);
    out.zeros[i] = m;
    out.zeros[n - 1 - i] = -m;
  }
  if (n % 2 == 1) out.zeros[n / 2] = 0.0;
  return out;
}

inline ZeroSet laguerre_zeros(int n, double alpha) {
  detail::check_degree(n, 1, "laguerre_zeros");
  detail::check_alpha(alpha, "laguerre_zeros");
  return {detail::jacobi_zeros(detail::laguerre_recurrence(n, alpha)), PolyFamily::Laguerre, n, alpha};
}

/// r_i = sum_{j != i} 1/(z_i - z_j) - z_i; vanishes on the zeros of H_N.
inline std::vector<double> stieltjes_residuals(std::span<const double> z) {
  std::vector<double> res(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j != i) s += 1.0 / (z[i] - z[j]);
    }
    res[i] = s - z[i];
  }
  return res;
}

/// With y_i = sqrt(2 z_i) for the zeros z of L_N^(nu-1):
/// r_i = sum_{j != i} (1/(y_i - y_j) + 1/(y_i + y_j)) + nu/y_i - y_i/2.
inline std::vector<double> electrostatic_residuals(std::span<const double> laguerre_zeros_desc, double nu) {
  std::vector<double> y(laguerre_zeros_desc.size());
  std::transform(laguerre_zeros_desc.begin(), laguerre_zeros_desc.end(), y.begin(),
                 [](double z) { return std::sqrt(2.0 * z); });
  std::vector<double> res(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    double s = nu / y[i];
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (j != i) s += 1.0 / (y[i] - y[j]) + 1.0 / (y[i] + y[j]);
    }
    res[i] = s - 0.5 * y[i];
  }
  return res;
}

}  // namespace weylbessel
