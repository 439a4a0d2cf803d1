#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "weylbessel/errors.hpp"
#include "weylbessel/mcharness.hpp"
#include "weylbessel/model.hpp"
#include "weylbessel/parallel.hpp"
#include "weylbessel/rng.hpp"

/**
 * \file
 * \brief Self-normalized importance sampling against the corner-start density
 * proportional to exp(-|x|^2 / (2t)) w(x), independent of any path simulation.
 *
 * The density is extended to all of R^N through |.| in the weight, which makes it
 * Weyl-invariant. The Gaussian proposal is widened to the target's second moment; a
 * proposal of variance O(t) misses the mass entirely once the weight degree is large. For Weyl-invariant observables the full-space average equals the
 * chamber average, and the unknown normalization constant cancels in the ratio.
 */

namespace weylbessel {

struct OracleConfig {
  /// Proposal is N(0, proposal_scale * v * I), where v = (N + 2 gamma) t / N is the target's
  /// per-coordinate second moment.
  double proposal_scale = 1.5;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline constexpr int kOracleMaxDimension = 4;
inline constexpr double kOracleMaxDegree = 40.0;  // bound on 2 * gamma
inline constexpr double kOracleMinEss = 100.0;

/// Observable of raw coordinates X_t.
using RawObservable = std::function<double(std::span<const double>)>;

struct OracleResult {
  std::vector<EstimateWithError> estimates;
  double effective_sample_size = 0.0;
};

/// Random stream ids for the oracle are offset so they never coincide with path streams.
inline constexpr std::uint64_t kOracleStreamOffset = std::uint64_t{1} << 62;

inline OracleResult is_expectations(std::span<const RawObservable> observables, int n, const ModelSpec& spec,
                                    double t, const OracleConfig& cfg) {
  if (spec.beta_infinite()) throw ArgumentError("oracle requires finite beta");
  if (n < 1 || n > kOracleMaxDimension) {
    throw ArgumentError("oracle: N must be in [1, " + std::to_string(kOracleMaxDimension) + "]");
  }
  if (2.0 * gamma_exponent(spec, n) > kOracleMaxDegree) {
    throw ArgumentError("oracle: weight degree 2*gamma exceeds " + std::to_string(kOracleMaxDegree));
  }
  if (!(t > 0.0)) throw ArgumentError("oracle: t must be positive");
  if (!(cfg.proposal_scale > 1.0)) throw ArgumentError("oracle: proposal_scale must exceed 1");
  if (cfg.samples < 2) throw ArgumentError("oracle: need at least two samples");

  const std::size_t m = cfg.samples;
  const std::size_t n_obs = observables.size();
  const auto dim = static_cast<std::size_t>(n);
  // E|X_t|^2 = (N + 2 gamma) t by homogeneity of the weight
  const double second_moment = (n + 2.0 * gamma_exponent(spec, n)) * t / n;
  const double proposal_var = cfg.proposal_scale * second_moment;
  const double proposal_sd = std::sqrt(proposal_var);
  // log target - log proposal, up to constants
  const double quad = 1.0 / (2.0 * t) - 1.0 / (2.0 * proposal_var);

  std::vector<double> log_w(m);
  std::vector<double> f(n_obs * m);
  parallel_for(m, cfg.threads, [&](std::size_t i) {
    NormalStream draw(cfg.seed, kOracleStreamOffset + i);
    std::vector<double> x(dim);
    double norm2 = 0.0;
    for (auto& v : x) {
      v = proposal_sd * draw();
      norm2 += v * v;
    }
    log_w[i] = log_weight_w(x, spec) - quad * norm2;
    for (std::size_t o = 0; o < n_obs; ++o) f[o * m + i] = observables[o](x);
  });

  double max_log = -std::numeric_limits<double>::infinity();
  for (double v : log_w) max_log = std::max(max_log, v);
  std::vector<double> w(m), w2(m);
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = std::exp(log_w[i] - max_log);
    w2[i] = w[i] * w[i];
  }
  const double sum_w = pairwise_sum(w);
  const double ess = sum_w * sum_w / pairwise_sum(w2);
  if (!(ess >= kOracleMinEss)) {
    throw DegenerateWeightsError("oracle: effective sample size " + std::to_string(ess) +
                                 " is below 100; increase samples or reduce N / beta");
  }

  OracleResult result;
  result.effective_sample_size = ess;
  std::vector<double> tmp(m);
  for (std::size_t o = 0; o < n_obs; ++o) {
    const double* fo = f.data() + o * m;
    for (std::size_t i = 0; i < m; ++i) tmp[i] = w[i] * fo[i];
    const double mean = pairwise_sum(tmp) / sum_w;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = w[i] * (fo[i] - mean);
      tmp[i] = d * d;
    }
    const double se = std::sqrt(pairwise_sum(tmp)) / sum_w;
    result.estimates.push_back({mean, se, m});
  }
  return result;
}

/// Self-normalized importance-sampling estimate of E f(X_t) for the process started at 0.
/// f must be Weyl-invariant: symmetric (type A), symmetric and even in each coordinate (type B).
inline EstimateWithError is_expectation(const RawObservable& observable, int n, const ModelSpec& spec, double t,
                                        const OracleConfig& cfg) {
  const RawObservable obs[] = {observable};
  return is_expectations(obs, n, spec, t, cfg).estimates.front();
}

}  // namespace weylbessel
