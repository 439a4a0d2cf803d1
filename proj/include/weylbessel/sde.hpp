#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "weylbessel/errors.hpp"
#include "weylbessel/model.hpp"
#include "weylbessel/rng.hpp"

/**
 * \file
 * \brief Path simulation for the Bessel SDEs (Euler-Maruyama with gap-controlled
 * substepping and Weyl reflection) and for the beta = infinity ODE (RK4).
 */

namespace weylbessel {

struct SimConfig {
  /// Outer step size.
  double dt_max = 1e-3;
  /// Substep whenever |drift| * dt exceeds theta * (smallest gap).
  double substep_safety = 0.2;
  /// Corner warm-start time; <= 0 selects 1e-4 * (t_final - t_0).
  double warm_start_delta = 0.0;
  /// Gaps below this are floored when forming the drift.
  double gap_floor = 1e-12;
  /// Simulate X / sqrt(beta) (true) or X itself (false).
  bool normalized = true;
  /// Hard cap on substeps per outer step; beyond it the drift is clamped.
  std::size_t max_substeps = std::size_t{1} << 14;
};

/// The chamber corner x = 0.
struct CornerStart {
  std::size_t dimension = 0;
};

using StartPoint = std::variant<ChamberPoint, CornerStart>;

inline std::size_t start_dimension(const StartPoint& s) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, CornerStart>) {
          return v.dimension;
        } else {
          return v.size();
        }
      },
      s);
}

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  ModelSpec spec;
  std::uint64_t seed = 0;
  /// True if states are X / sqrt(beta).
  bool normalized = true;
};

namespace detail {

inline void validate_config(const SimConfig& cfg) {
  if (!(cfg.dt_max > 0.0)) throw ArgumentError("dt_max must be positive");
  if (!(cfg.substep_safety > 0.0 && cfg.substep_safety < 1.0)) throw ArgumentError("substep_safety must be in (0,1)");
  if (!(cfg.gap_floor > 0.0)) throw ArgumentError("gap_floor must be positive");
  if (cfg.max_substeps == 0) throw ArgumentError("max_substeps must be positive");
}

inline void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw ArgumentError("time grid is empty");
  if (!(grid[0] >= 0.0)) throw ArgumentError("time grid must start at t0 >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ArgumentError("time grid must be strictly increasing");
  }
}

// Smallest distance to a singular set of the drift: adjacent gaps, and the wall at 0
// for type B with nu > 0 (measured as the smallest coordinate).
inline double min_gap(std::span<const double> x, const ModelSpec& spec) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) g = std::min(g, x[i] - x[i + 1]);
  if (spec.system() == RootSystem::B && spec.nu() > 0.0 && !x.empty()) g = std::min(g, x.back());
  return g;
}

struct StepScratch {
  std::vector<double> drift;
};

}  // namespace detail

/// One Euler-Maruyama step of length dt from x (in place). `draw` yields standard normals.
///
/// Normalized mode: x += b(x) h + beta^{-1/2} sqrt(h) Z; raw mode: x += beta b(x) h + sqrt(h) Z,
/// with b the beta-free drift. The step is cut into equal pieces whenever the drift
/// displacement would exceed theta times the smallest gap; the split is recomputed after
/// each piece, and each piece draws fresh noise. Every piece ends with the chamber projection.
template <class NormalSource>
void step_euler(std::vector<double>& x, double dt, NormalSource& draw, const ModelSpec& spec,
                const SimConfig& cfg, detail::StepScratch& scratch) {
  const std::size_t n = x.size();
  if (spec.beta_infinite()) throw ArgumentError("step_euler requires finite beta; use simulate_ode_path");
  const double drift_scale = cfg.normalized ? 1.0 : spec.beta();
  const double sigma = cfg.normalized ? 1.0 / std::sqrt(spec.beta()) : 1.0;
  const double theta = cfg.substep_safety;
  scratch.drift.resize(n);

  double remaining = dt;
  std::size_t used = 0;
  while (remaining > 0.0) {
    detail::normalized_drift_into(x, spec.system(), spec.nu(), cfg.gap_floor, scratch.drift);
    double max_drift = 0.0;
    for (double& b : scratch.drift) {
      b *= drift_scale;
      max_drift = std::max(max_drift, std::abs(b));
    }
    const double gap = std::max(detail::min_gap(x, spec), cfg.gap_floor);
    const double allowed = theta * gap;
    double h = remaining;
    if (max_drift * remaining > allowed) {
      const double pieces = std::ceil(max_drift * remaining / allowed);
      const double budget = static_cast<double>(cfg.max_substeps - used);
      if (pieces <= budget) {
        h = remaining / pieces;
      } else if (budget > 1.0) {
        h = remaining / budget;
      }
      if (used + 1 >= cfg.max_substeps) {
        // out of budget: finish the step with the displacement clamped to theta * gap
        const double clamp = allowed / (max_drift * remaining);
        for (double& b : scratch.drift) b *= clamp;
        h = remaining;
      } else if (max_drift * h > allowed) {
        const double clamp = allowed / (max_drift * h);
        for (double& b : scratch.drift) b *= clamp;
      }
    }
    const double noise_scale = sigma * std::sqrt(h);
    for (std::size_t i = 0; i < n; ++i) x[i] += scratch.drift[i] * h + noise_scale * draw();
    project_in_place(x, spec.system());
    ++used;
    remaining = (h == remaining) ? 0.0 : remaining - h;
  }
}

template <class NormalSource>
void step_euler(std::vector<double>& x, double dt, NormalSource& draw, const ModelSpec& spec,
                const SimConfig& cfg) {
  detail::StepScratch scratch;
  step_euler(x, dt, draw, spec, cfg, scratch);
}

/// Right-hand side of the beta = infinity ODE.
inline void ode_rhs(std::span<const double> x, const ModelSpec& spec, std::span<double> out) {
  detail::normalized_drift_into(x, spec.system(), spec.nu(), 0.0, out);
}

/// Classical RK4 integration of the beta = infinity ODE, recording states at grid times.
/// A corner start uses the closed-form flow instead of integration.
inline Trajectory simulate_ode_path(const StartPoint& start, std::span<const double> grid, const ModelSpec& spec,
                                    const SimConfig& cfg) {
  if (!spec.beta_infinite()) throw ArgumentError("simulate_ode_path requires beta = infinity");
  detail::validate_config(cfg);
  detail::validate_grid(grid);
  Trajectory traj{{grid.begin(), grid.end()}, {}, spec, 0, true};
  const double t0 = grid[0];

  if (const auto* corner = std::get_if<CornerStart>(&start)) {
    const int n = static_cast<int>(corner->dimension);
    for (double t : grid) {
      if (t == t0 || n == 0) {
        traj.states.emplace_back(corner->dimension, 0.0);
      } else {
        traj.states.push_back(frozen_flow(t - t0, 0.0, spec, n));
      }
    }
    return traj;
  }

  const auto& p = std::get<ChamberPoint>(start);
  if (p.system() != spec.system()) throw ArgumentError("start point and model use different root systems");
  std::vector<double> x = p.coords();
  if (!in_interior(x, spec.system())) {
    throw ArgumentError("simulate_ode_path: start point must be interior (or use CornerStart)");
  }
  const std::size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), next(n);
  const double min_step = 1e-12 * std::max(1.0, grid.back());
  traj.states.push_back(x);
  double t = t0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    while (t < grid[g]) {
      double h = std::min(cfg.dt_max, grid[g] - t);
      for (;;) {
        ode_rhs(x, spec, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        ode_rhs(tmp, spec, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        ode_rhs(tmp, spec, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
        ode_rhs(tmp, spec, k4);
        for (std::size_t i = 0; i < n; ++i) next[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        bool finite = true;
        for (double v : next) finite = finite && std::isfinite(v);
        if (finite && in_interior(next, spec.system())) break;
        h *= 0.5;
        if (h < min_step) throw IntegrationError("simulate_ode_path: step size underflow near a collision");
      }
      x.swap(next);
      t = (grid[g] - t <= h) ? grid[g] : t + h;
    }
    traj.states.push_back(x);
  }
  return traj;
}

/// Simulates one path of the Bessel process, recording states at exactly the grid times.
///
/// The path uses random stream (seed, path_index). A corner start is warm-started at
/// t0 + delta on the deterministic flow of the frozen model with the same effective
/// parameter (nu + 1/(2 beta) in type B), then continued with Euler steps.
/// beta = infinity delegates to simulate_ode_path.
inline Trajectory simulate_path(const StartPoint& start, std::span<const double> grid, const ModelSpec& spec,
                                const SimConfig& cfg, std::uint64_t seed, std::uint64_t path_index = 0) {
  if (spec.beta_infinite()) {
    if (!cfg.normalized) throw ArgumentError("raw coordinates are undefined for beta = infinity");
    auto traj = simulate_ode_path(start, grid, spec, cfg);
    traj.seed = seed;
    return traj;
  }
  detail::validate_config(cfg);
  detail::validate_grid(grid);
  const std::size_t n = start_dimension(start);
  const double t0 = grid[0];
  const double t_final = grid.back();
  const double raw_scale = cfg.normalized ? 1.0 : std::sqrt(spec.beta());

  Trajectory traj{{grid.begin(), grid.end()}, {}, spec, seed, cfg.normalized};
  traj.states.reserve(grid.size());
  NormalStream draw(seed, path_index);
  detail::StepScratch scratch;

  std::vector<double> x;
  double t = t0;
  std::size_t g = 0;
  if (const auto* corner = std::get_if<CornerStart>(&start)) {
    x.assign(n, 0.0);
    traj.states.push_back(x);
    ++g;
    if (n > 0) {
      const double delta = cfg.warm_start_delta > 0.0 ? cfg.warm_start_delta : 1e-4 * (t_final - t0);
      const auto frozen = spec.frozen();
      const int dim = static_cast<int>(corner->dimension);
      // grid points inside the warm-start window sit on the deterministic flow
      while (g < grid.size() && grid[g] <= t0 + delta) {
        auto s = frozen_flow(grid[g] - t0, 0.0, frozen, dim);
        for (auto& v : s) v *= raw_scale;
        traj.states.push_back(std::move(s));
        ++g;
      }
      if (g < grid.size()) {
        x = frozen_flow(delta, 0.0, frozen, dim);
        for (auto& v : x) v *= raw_scale;
        t = t0 + delta;
      }
    }
  } else {
    const auto& p = std::get<ChamberPoint>(start);
    if (p.system() != spec.system()) throw ArgumentError("start point and model use different root systems");
    x = p.coords();
    traj.states.push_back(x);
    ++g;
  }

  for (; g < grid.size(); ++g) {
    const double target = grid[g];
    while (t < target) {
      const double left = target - t;
      // absorb a tiny remainder into the current step instead of taking a sliver step
      const double h = (left <= cfg.dt_max * (1.0 + 1e-9)) ? left : cfg.dt_max;
      step_euler(x, h, draw, spec, cfg, scratch);
      t = (h == left) ? target : t + h;
    }
    traj.states.push_back(x);
  }
  return traj;
}

}  // namespace weylbessel
