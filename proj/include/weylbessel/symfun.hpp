#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "weylbessel/errors.hpp"

/**
 * \file
 * \brief Elementary symmetric polynomials and the root-to-coefficient map.
 *
 * All evaluations use the triangular insertion recurrence
 * e_k(x_1..x_{m+1}) = e_k(x_1..x_m) + x_{m+1} e_{k-1}(x_1..x_m),
 * which never forms the expanded product and is exact on integer inputs.
 */

namespace weylbessel {

/// Dense coefficients of a polynomial in one variable; coeffs[j] multiplies z^j.
struct PolyCoeffs {
  std::vector<double> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  /// Horner evaluation.
  double operator()(double z) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
};

/// (e_0, ..., e_m) of x in one pass.
inline std::vector<double> elem_sym_all(std::span<const double> x) {
  std::vector<double> e(x.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += x[i] * e[k - 1];
  }
  return e;
}

/// e_k(x) for 0 <= k <= x.size().
inline double elem_sym(int k, std::span<const double> x) {
  if (k < 0 || static_cast<std::size_t>(k) > x.size()) {
    throw ArgumentError("elem_sym: k=" + std::to_string(k) + " outside [0, " + std::to_string(x.size()) + "]");
  }
  const auto kk = static_cast<std::size_t>(k);
  // Only the first k+1 entries of the triangle are needed.
  std::vector<double> e(kk + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = std::min(i + 1, kk); j >= 1; --j) e[j] += x[i] * e[j - 1];
  }
  return e[kk];
}

/// x with the (0-based) indices in `excluded` removed; duplicates in `excluded` count once.
inline std::vector<double> subvector_excluding(std::span<const double> x, std::span<const std::size_t> excluded) {
  std::vector<bool> drop(x.size(), false);
  for (auto idx : excluded) {
    if (idx >= x.size()) {
      throw ArgumentError("excluded index " + std::to_string(idx) + " out of range for length " +
                          std::to_string(x.size()));
    }
    drop[idx] = true;
  }
  std::vector<double> sub;
  sub.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!drop[i]) sub.push_back(x[i]);
  }
  return sub;
}

/// e_k of the subvector of x obtained by removing the indices in `excluded`.
inline double elem_sym_excluding(int k, std::span<const double> x, std::span<const std::size_t> excluded) {
  const auto sub = subvector_excluding(x, excluded);
  if (k < 0 || static_cast<std::size_t>(k) > sub.size()) {
    throw ArgumentError("elem_sym_excluding: k=" + std::to_string(k) + " exceeds the " +
                        std::to_string(sub.size()) + " remaining variables");
  }
  return elem_sym(k, sub);
}

inline double elem_sym_excluding(int k, std::span<const double> x, std::initializer_list<std::size_t> excluded) {
  return elem_sym_excluding(k, x, std::span<const std::size_t>(excluded.begin(), excluded.size()));
}

/// Monic polynomial prod_i (z - x_i); coefficient of z^k is (-1)^(N-k) e_{N-k}(x).
inline PolyCoeffs poly_from_roots(std::span<const double> x) {
  const auto e = elem_sym_all(x);
  const std::size_t n = x.size();
  PolyCoeffs p;
  p.coeffs.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    p.coeffs[k] = sign * e[n - k];
  }
  return p;
}

/// Coordinate-wise squares.
inline std::vector<double> squared(std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v * v; });
  return out;
}

}  // namespace weylbessel
