#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "weylbessel/errors.hpp"
#include "weylbessel/orthopoly.hpp"

/**
 * \file
 * \brief Root-system models of types A and B: chambers, drifts, weights, generators,
 * and the deterministic (beta = infinity) profiles and flows.
 *
 * Coordinates are "normalized" (X / sqrt(beta)) unless a function says otherwise.
 * Type D is covered by type B with nu = 0 for every observable of the squared process.
 */

namespace weylbessel {

enum class RootSystem { A, B };

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

inline const char* to_string(RootSystem s) { return s == RootSystem::A ? "A" : "B"; }

/// Root system plus multiplicities (beta for the pair interaction, nu*beta for the wall at 0 in type B).
class ModelSpec {
 public:
  static ModelSpec type_a(double beta) { return ModelSpec(RootSystem::A, beta, 0.0); }
  static ModelSpec type_b(double beta, double nu) { return ModelSpec(RootSystem::B, beta, nu); }
  static ModelSpec make(RootSystem system, double beta, double nu = 0.0) {
    return system == RootSystem::A ? type_a(beta) : type_b(beta, nu);
  }

  RootSystem system() const { return system_; }
  double beta() const { return beta_; }
  double nu() const { return nu_; }
  bool beta_infinite() const { return std::isinf(beta_); }

  /// nu + 1/(2 beta); equals nu when beta is infinite. Meaningless for type A.
  double nu_eff() const { return beta_infinite() ? nu_ : nu_ + 0.5 / beta_; }

  /// Same system and effective wall parameter, with beta = infinity.
  ModelSpec frozen() const {
    return system_ == RootSystem::A ? type_a(kInfiniteBeta) : type_b(kInfiniteBeta, nu_eff());
  }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  ModelSpec(RootSystem system, double beta, double nu) : system_(system), beta_(beta), nu_(nu) {
    if (!(beta > 0.0)) throw ArgumentError("beta must be positive (or infinite)");
    if (!(nu >= 0.0) || std::isinf(nu)) throw ArgumentError("nu must be a finite nonnegative number");
  }

  RootSystem system_;
  double beta_;
  double nu_;
};

/// True iff x is ordered decreasingly (and nonnegative for type B).
inline bool in_chamber(std::span<const double> x, RootSystem system) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i] >= x[i + 1])) return false;
  }
  if (system == RootSystem::B && !x.empty() && !(x.back() >= 0.0)) return false;
  return true;
}

/// Strictly inside the chamber: no ties, and strictly positive for type B.
inline bool in_interior(std::span<const double> x, RootSystem system) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i] > x[i + 1])) return false;
  }
  if (system == RootSystem::B && !x.empty() && !(x.back() > 0.0)) return false;
  return true;
}

/// A configuration known to lie in the closed chamber of its root system.
class ChamberPoint {
 public:
  ChamberPoint(std::vector<double> coords, RootSystem system) : coords_(std::move(coords)), system_(system) {
    if (!in_chamber(coords_, system_)) {
      throw ArgumentError(std::string("point is not in the closed Weyl chamber of type ") + to_string(system_));
    }
  }

  const std::vector<double>& coords() const { return coords_; }
  RootSystem system() const { return system_; }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  std::vector<double> coords_;
  RootSystem system_;
};

/// Weyl-group projection onto the closed chamber (sorting, plus absolute values for type B).
/// Leaves every symmetric function (type A) or symmetric function of squares (type B) unchanged.
inline void project_in_place(std::vector<double>& x, RootSystem system) {
  if (system == RootSystem::B) {
    for (auto& v : x) v = std::abs(v);
  }
  // insertion sort: states are almost always already ordered
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double v = x[i];
    std::size_t j = i;
    while (j > 0 && x[j - 1] < v) {
      x[j] = x[j - 1];
      --j;
    }
    x[j] = v;
  }
}

inline ChamberPoint project_to_chamber(std::vector<double> x, RootSystem system) {
  project_in_place(x, system);
  return ChamberPoint(std::move(x), system);
}

namespace detail {

// Reciprocal of a difference, with |d| floored at eps (sign kept; +eps when d == 0).
inline double floored_inverse(double d, double eps) {
  if (std::abs(d) < eps) return d < 0.0 ? -1.0 / eps : 1.0 / eps;
  return 1.0 / d;
}

// Beta-free drift written into out. With eps = 0 ties produce infinities; callers check first.
inline void normalized_drift_into(std::span<const double> x, RootSystem system, double nu, double eps,
                                  std::span<double> out) {
  const std::size_t n = x.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double inv = floored_inverse(x[i] - x[j], eps);
      out[i] += inv;
      out[j] -= inv;
      if (system == RootSystem::B) {
        const double inv_sum = floored_inverse(x[i] + x[j], eps);
        out[i] += inv_sum;
        out[j] += inv_sum;
      }
    }
  }
  if (system == RootSystem::B && nu != 0.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] += nu * floored_inverse(x[i], eps);
  }
}

inline void require_interior(std::span<const double> x, RootSystem system, const char* who) {
  if (!in_interior(x, system)) {
    throw SingularInputError(std::string(who) + ": point must lie strictly inside the chamber");
  }
}

}  // namespace detail

/// beta * sum_{j != i} 1/(x_i - x_j).
inline std::vector<double> drift_A(std::span<const double> x, double beta) {
  detail::require_interior(x, RootSystem::A, "drift_A");
  std::vector<double> out(x.size());
  detail::normalized_drift_into(x, RootSystem::A, 0.0, 0.0, out);
  for (auto& v : out) v *= beta;
  return out;
}

/// beta * sum_{j != i} (1/(x_i - x_j) + 1/(x_i + x_j)) + nu*beta/x_i.
inline std::vector<double> drift_B(std::span<const double> x, double beta, double nu) {
  detail::require_interior(x, RootSystem::B, "drift_B");
  std::vector<double> out(x.size());
  detail::normalized_drift_into(x, RootSystem::B, nu, 0.0, out);
  for (auto& v : out) v *= beta;
  return out;
}

/// Drift of the renormalized process X/sqrt(beta); independent of beta. Type B uses nu, not nu_eff.
inline std::vector<double> drift_normalized(std::span<const double> x, const ModelSpec& spec) {
  detail::require_interior(x, spec.system(), "drift_normalized");
  std::vector<double> out(x.size());
  detail::normalized_drift_into(x, spec.system(), spec.nu(), 0.0, out);
  return out;
}

/// log w(x), taking absolute values so the weight extends Weyl-invariantly to all of R^N.
/// Returns -inf on walls.
inline double log_weight_w(std::span<const double> x, const ModelSpec& spec) {
  if (spec.beta_infinite()) throw ArgumentError("weight_w requires finite beta");
  const double two_beta = 2.0 * spec.beta();
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d = spec.system() == RootSystem::A ? x[i] - x[j] : x[i] * x[i] - x[j] * x[j];
      acc += two_beta * std::log(std::abs(d));
    }
  }
  if (spec.system() == RootSystem::B && spec.nu() != 0.0) {
    for (double v : x) acc += two_beta * spec.nu() * std::log(std::abs(v));
  }
  return acc;
}

/// prod_{i<j}(x_i - x_j)^{2beta} (type A) or prod_{i<j}(x_i^2 - x_j^2)^{2beta} prod x_i^{2 nu beta} (type B).
inline double weight_w(std::span<const double> x, const ModelSpec& spec) {
  return std::exp(log_weight_w(x, spec));
}

/// Homogeneity degree gamma of the weight (weight_w is homogeneous of degree 2*gamma).
inline double gamma_exponent(const ModelSpec& spec, int n) {
  if (spec.beta_infinite()) throw ArgumentError("gamma_exponent requires finite beta");
  if (n < 0) throw ArgumentError("gamma_exponent: negative dimension");
  const double b = spec.beta();
  if (spec.system() == RootSystem::A) return b * n * (n - 1) / 2.0;
  return b * n * (n - 1) + spec.nu() * b * n;
}

/// Type-B stationary shape for effective parameter nu_eff: y_i = sqrt(2 z_i), z the zeros of L_N^(nu_eff-1).
inline std::vector<double> frozen_profile_b(int n, double nu_eff) {
  if (!(nu_eff > 0.0)) throw ArgumentError("type-B frozen profile requires nu_eff > 0");
  auto zs = laguerre_zeros(n, nu_eff - 1.0).zeros;
  for (auto& z : zs) z = std::sqrt(2.0 * z);
  return zs;
}

/// Hermite zeros (type A) or the type-B profile for spec.nu_eff().
inline std::vector<double> frozen_profile(const ModelSpec& spec, int n) {
  if (spec.system() == RootSystem::A) return hermite_zeros(n).zeros;
  return frozen_profile_b(n, spec.nu_eff());
}

/// Solution of the beta = infinity ODE: sqrt(2t + c^2) z (type A, started at c z),
/// or sqrt(t) y (type B, started at the corner).
inline std::vector<double> frozen_flow(double t, double c, const ModelSpec& spec, int n) {
  if (!(t >= 0.0) || !(c >= 0.0)) throw ArgumentError("frozen_flow: t and c must be nonnegative");
  auto profile = frozen_profile(spec, n);
  double scale;
  if (spec.system() == RootSystem::A) {
    scale = std::sqrt(2.0 * t + c * c);
  } else {
    if (c != 0.0) throw UnsupportedError("frozen_flow: type B has a closed form only for the corner start (c = 0)");
    scale = std::sqrt(t);
  }
  for (auto& v : profile) v *= scale;
  return profile;
}

/// Function of (state, time) to which generators are applied.
using SpaceTimeFunction = std::function<double(std::span<const double>, double)>;

/// Components of (d/dt + G) f at one point, G = (1/(2 beta)) Laplacian + normalized drift . grad.
struct GeneratorTerms {
  double time_derivative = 0.0;
  double drift_term = 0.0;
  double diffusion_term = 0.0;
  /// 1 + sum of absolute values of all individual contributions; the natural size of the residual.
  double scale = 1.0;

  double value() const { return time_derivative + drift_term + diffusion_term; }
};

namespace detail {

struct FiniteDifferences {
  double dt = 0.0;
  std::vector<double> grad;
  std::vector<double> second;
};

inline FiniteDifferences central_differences(const SpaceTimeFunction& f, std::span<const double> x, double t,
                                             double h) {
  FiniteDifferences out;
  const std::size_t n = x.size();
  out.grad.resize(n);
  out.second.resize(n);
  std::vector<double> xp(x.begin(), x.end());
  const double f0 = f(x, t);
  out.dt = (f(x, t + h) - f(x, t - h)) / (2.0 * h);
  for (std::size_t i = 0; i < n; ++i) {
    xp[i] = x[i] + h;
    const double fp = f(xp, t);
    xp[i] = x[i] - h;
    const double fm = f(xp, t);
    xp[i] = x[i];
    out.grad[i] = (fp - fm) / (2.0 * h);
    out.second[i] = (fp - 2.0 * f0 + fm) / (h * h);
  }
  return out;
}

}  // namespace detail

/// Finite-difference evaluation of the space-time generator of the renormalized process.
/// h <= 0 selects the default step 1e-4 (1 + |x|). With `richardson`, steps h and h/2 are
/// combined to cancel the O(h^2) error.
inline GeneratorTerms generator_terms(const SpaceTimeFunction& f, std::span<const double> x, double t,
                                      const ModelSpec& spec, double h = 0.0, bool richardson = false) {
  detail::require_interior(x, spec.system(), "apply_generator");
  if (h <= 0.0) {
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    h = 1e-4 * (1.0 + std::sqrt(norm2));
  }
  auto fd = detail::central_differences(f, x, t, h);
  if (richardson) {
    const auto half = detail::central_differences(f, x, t, 0.5 * h);
    fd.dt = (4.0 * half.dt - fd.dt) / 3.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      fd.grad[i] = (4.0 * half.grad[i] - fd.grad[i]) / 3.0;
      fd.second[i] = (4.0 * half.second[i] - fd.second[i]) / 3.0;
    }
  }
  std::vector<double> drift(x.size());
  detail::normalized_drift_into(x, spec.system(), spec.nu(), 0.0, drift);
  const double diffusion = spec.beta_infinite() ? 0.0 : 0.5 / spec.beta();

  GeneratorTerms terms;
  terms.time_derivative = fd.dt;
  double abs_sum = std::abs(fd.dt);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dterm = drift[i] * fd.grad[i];
    const double sterm = diffusion * fd.second[i];
    terms.drift_term += dterm;
    terms.diffusion_term += sterm;
    abs_sum += std::abs(dterm) + std::abs(sterm);
  }
  terms.scale = 1.0 + abs_sum;
  return terms;
}

inline double apply_generator(const SpaceTimeFunction& f, std::span<const double> x, double t,
                              const ModelSpec& spec, double h = 0.0) {
  return generator_terms(f, x, t, spec, h).value();
}

}  // namespace weylbessel
