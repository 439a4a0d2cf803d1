#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "weylbessel/errors.hpp"
#include "weylbessel/expectations.hpp"
#include "weylbessel/parallel.hpp"
#include "weylbessel/sde.hpp"

namespace weylbessel {

/// Monte-Carlo mean with its standard error.
struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

/// z-score of an estimate against a reference; 0 when both agree exactly, inf for a
/// mismatch with zero standard error.
inline double z_score(const EstimateWithError& e, double reference) {
  const double diff = std::abs(e.mean - reference);
  if (e.std_error > 0.0) return diff / e.std_error;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

/// z-score of the difference of two independent estimates.
inline double z_score(const EstimateWithError& a, const EstimateWithError& b) {
  const double se = std::hypot(a.std_error, b.std_error);
  const double diff = std::abs(a.mean - b.mean);
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

/// Sample mean and standard error (two-pass, pairwise sums).
inline EstimateWithError summarize(std::span<const double> values) {
  if (values.size() < 2) throw ArgumentError("summarize: need at least two samples");
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return {values.front(), 0.0, values.size()};
  }
  const auto m = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / m;
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - mean) * (values[i] - mean);
  const double var = pairwise_sum(dev) / (m - 1.0);
  return {mean, std::sqrt(var / m), values.size()};
}

/// Observable of the renormalized state X~ = X / sqrt(beta) at time t.
using Observable = std::function<double(std::span<const double>, double)>;

struct HarnessOptions {
  std::size_t paths = 20000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Estimates of each observable at each grid time: result[observable][time].
///
/// Path i uses random stream (seed, i). Observables always see normalized coordinates,
/// whatever cfg.normalized says about the simulation itself.
inline std::vector<std::vector<EstimateWithError>> estimate_many(std::span<const Observable> observables,
                                                                 const StartPoint& start,
                                                                 std::span<const double> grid,
                                                                 const ModelSpec& spec, const SimConfig& cfg,
                                                                 const HarnessOptions& opts) {
  if (opts.paths < 2) throw ArgumentError("estimate: need at least two paths");
  const std::size_t n_obs = observables.size();
  const std::size_t n_t = grid.size();
  const std::size_t m = opts.paths;
  // values[(o * n_t + g) * m + path]
  std::vector<double> values(n_obs * n_t * m);
  const double to_normalized = (cfg.normalized || spec.beta_infinite()) ? 1.0 : 1.0 / std::sqrt(spec.beta());

  parallel_for(m, opts.threads, [&](std::size_t path) {
    std::optional<Trajectory> traj;
    try {
      traj.emplace(simulate_path(start, grid, spec, cfg, opts.seed, path));
    } catch (const ArgumentError&) {
      throw;
    } catch (const std::exception& ex) {
      throw PathError(path, ex.what());
    }
    std::vector<double> state;
    for (std::size_t g = 0; g < n_t; ++g) {
      state = traj->states[g];
      if (to_normalized != 1.0) {
        for (auto& v : state) v *= to_normalized;
      }
      for (std::size_t o = 0; o < n_obs; ++o) values[(o * n_t + g) * m + path] = observables[o](state, grid[g]);
    }
  });

  std::vector<std::vector<EstimateWithError>> out(n_obs, std::vector<EstimateWithError>(n_t));
  for (std::size_t o = 0; o < n_obs; ++o) {
    for (std::size_t g = 0; g < n_t; ++g) {
      out[o][g] = summarize(std::span<const double>(values).subspan((o * n_t + g) * m, m));
    }
  }
  return out;
}

inline std::vector<EstimateWithError> estimate(const Observable& observable, const StartPoint& start,
                                               std::span<const double> grid, const ModelSpec& spec,
                                               const SimConfig& cfg, const HarnessOptions& opts) {
  const Observable obs[] = {observable};
  return estimate_many(obs, start, grid, spec, cfg, opts).front();
}

/// Mean of a compensator over time; flat within noise if it is a martingale.
struct FlatnessReport {
  int k = 0;
  std::vector<double> times;
  std::vector<double> means;
  std::vector<double> std_errors;
  double reference = 0.0;
  double max_z = 0.0;

  static constexpr double kThreshold = 4.0;
  bool passed() const { return max_z <= kThreshold; }
};

namespace detail {

inline double start_compensator(const ModelSpec& spec, int n, int k, double t0, const StartPoint& start) {
  if (std::holds_alternative<CornerStart>(start)) {
    const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
    return compensator(spec, n, k, t0, zero);
  }
  return compensator(spec, n, k, t0, std::get<ChamberPoint>(start).coords());
}

}  // namespace detail

/// Flatness reports for k = 1..N from one shared set of paths.
inline std::vector<FlatnessReport> martingale_flatness_all(int n, const ModelSpec& spec, const StartPoint& start,
                                                           std::span<const double> grid, const SimConfig& cfg,
                                                           const HarnessOptions& opts) {
  if (static_cast<std::size_t>(n) != start_dimension(start) || n < 1) {
    throw ArgumentError("martingale_flatness: N does not match the start point");
  }
  if (spec.beta_infinite()) throw ArgumentError("martingale_flatness requires finite beta");
  std::vector<Observable> obs;
  for (int k = 1; k <= n; ++k) {
    obs.emplace_back([spec, n, k](std::span<const double> x, double t) { return compensator(spec, n, k, t, x); });
  }
  const auto est = estimate_many(obs, start, grid, spec, cfg, opts);
  std::vector<FlatnessReport> reports;
  for (int k = 1; k <= n; ++k) {
    FlatnessReport r;
    r.k = k;
    r.times.assign(grid.begin(), grid.end());
    r.reference = detail::start_compensator(spec, n, k, grid[0], start);
    for (const auto& e : est[static_cast<std::size_t>(k - 1)]) {
      r.means.push_back(e.mean);
      r.std_errors.push_back(e.std_error);
      r.max_z = std::max(r.max_z, z_score(e, r.reference));
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

inline FlatnessReport martingale_flatness(int n, int k, const ModelSpec& spec, const StartPoint& start,
                                          std::span<const double> grid, const SimConfig& cfg,
                                          const HarnessOptions& opts) {
  if (k < 1 || k > n) throw ArgumentError("martingale_flatness: k must be in [1, N]");
  if (static_cast<std::size_t>(n) != start_dimension(start)) {
    throw ArgumentError("martingale_flatness: N does not match the start point");
  }
  if (spec.beta_infinite()) throw ArgumentError("martingale_flatness requires finite beta");
  const Observable obs = [spec, n, k](std::span<const double> x, double t) { return compensator(spec, n, k, t, x); };
  const auto est = estimate(obs, start, grid, spec, cfg, opts);
  FlatnessReport r;
  r.k = k;
  r.times.assign(grid.begin(), grid.end());
  r.reference = detail::start_compensator(spec, n, k, grid[0], start);
  for (const auto& e : est) {
    r.means.push_back(e.mean);
    r.std_errors.push_back(e.std_error);
    r.max_z = std::max(r.max_z, z_score(e, r.reference));
  }
  return r;
}

struct CharpolyRow {
  double y = 0.0;
  EstimateWithError estimate;
  double closed_form = 0.0;
  double z = 0.0;
};

/// Raw-coordinate characteristic polynomial prod (y - X_i) (type A) or prod (y - X_i^2) (type B)
/// evaluated on a normalized state.
inline double raw_charpoly(const ModelSpec& spec, std::span<const double> normalized_state, double y) {
  const double b = spec.beta();
  double p = 1.0;
  for (double v : normalized_state) p *= spec.system() == RootSystem::A ? y - std::sqrt(b) * v : y - b * v * v;
  return p;
}

inline double expected_charpoly(const ModelSpec& spec, int n, double t, double y) {
  return spec.system() == RootSystem::A ? expected_charpoly_A(n, spec.beta(), t, y)
                                        : expected_charpoly_B(n, spec.beta(), spec.nu(), t, y);
}

/// Corner-start Monte-Carlo estimate of the expected characteristic polynomial against its closed form.
inline std::vector<CharpolyRow> charpoly_check(int n, const ModelSpec& spec, double t, std::span<const double> ys,
                                               const SimConfig& cfg, const HarnessOptions& opts) {
  if (spec.beta_infinite()) throw ArgumentError("charpoly_check requires finite beta");
  if (!(t > 0.0)) throw ArgumentError("charpoly_check: t must be positive");
  if (n < 1) throw ArgumentError("charpoly_check: N must be >= 1");
  std::vector<Observable> obs;
  for (double y : ys) {
    obs.emplace_back([spec, y](std::span<const double> x, double) { return raw_charpoly(spec, x, y); });
  }
  const double grid[] = {0.0, t};
  const auto est = estimate_many(obs, CornerStart{static_cast<std::size_t>(n)}, grid, spec, cfg, opts);
  std::vector<CharpolyRow> rows;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    CharpolyRow row;
    row.y = ys[i];
    row.estimate = est[i][1];
    row.closed_form = expected_charpoly(spec, n, t, ys[i]);
    row.z = z_score(row.estimate, row.closed_form);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace weylbessel
