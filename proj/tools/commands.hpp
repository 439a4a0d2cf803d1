#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "weylbessel/errors.hpp"
#include "weylbessel/expectations.hpp"
#include "weylbessel/mcharness.hpp"
#include "weylbessel/model.hpp"
#include "weylbessel/oracle.hpp"
#include "weylbessel/orthopoly.hpp"
#include "weylbessel/parallel.hpp"
#include "weylbessel/rng.hpp"
#include "weylbessel/sde.hpp"
#include "weylbessel/symfun.hpp"

#ifndef WEYLBESSEL_VERSION
#define WEYLBESSEL_VERSION "0.0.0"
#endif

namespace weylbessel::cli {

using nlohmann::json;

inline constexpr const char* kVersion = WEYLBESSEL_VERSION;
inline constexpr double kZThreshold = 4.0;
inline constexpr double kHarmonicTolerance = 1e-5;

/// Process exit codes.
enum ExitCode : int { kOk = 0, kFail = 1, kUsage = 2, kNumerical = 3 };

/// What a command produces: a human-readable report, an optional CSV table and its exit code.
struct Output {
  int exit_code = kOk;
  std::string report;
  std::string csv;
};

/// Shortest text that round-trips a double.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short text for reports.
inline std::string fmt_short(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline RootSystem parse_system(const std::string& s) {
  if (s == "A" || s == "a") return RootSystem::A;
  if (s == "B" || s == "b") return RootSystem::B;
  throw ArgumentError("system must be A or B, got '" + s + "'");
}

inline double parse_beta(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return kInfiniteBeta;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ArgumentError("beta must be a positive number or 'inf', got '" + s + "'");
  return v;
}

inline std::string beta_text(double beta) { return std::isinf(beta) ? "inf" : fmt(beta); }

struct ModelArgs {
  std::string system = "A";
  int n = 2;
  double beta = 1.0;
  double nu = 0.0;

  ModelSpec spec() const {
    if (n < 1) throw ArgumentError("N must be at least 1");
    return ModelSpec::make(parse_system(system), beta, nu);
  }

  std::string describe() const {
    std::string s = "type " + system + ", N=" + std::to_string(n) + ", beta=" + beta_text(beta);
    if (parse_system(system) == RootSystem::B) s += ", nu=" + fmt_short(nu);
    return s;
  }
};

inline void to_json(json& j, const ModelArgs& m) {
  j = json{{"system", m.system}, {"n", m.n}, {"beta", beta_text(m.beta)}, {"nu", m.nu}};
}

inline void from_json(const json& j, ModelArgs& m) {
  j.at("system").get_to(m.system);
  j.at("n").get_to(m.n);
  m.beta = parse_beta(j.at("beta").get<std::string>());
  j.at("nu").get_to(m.nu);
}

/// Start point from an optional coordinate list; empty means the corner.
inline StartPoint make_start(const std::vector<double>& x0, const ModelArgs& m) {
  if (x0.empty()) return CornerStart{static_cast<std::size_t>(m.n)};
  if (x0.size() != static_cast<std::size_t>(m.n)) {
    throw ArgumentError("x0 has " + std::to_string(x0.size()) + " coordinates, expected N=" + std::to_string(m.n));
  }
  return ChamberPoint(x0, parse_system(m.system));
}

inline json x0_json(const std::vector<double>& x0) {
  if (x0.empty()) return "corner";
  return x0;
}

inline std::vector<double> x0_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "corner") throw ArgumentError("x0 must be a list or 'corner'");
    return {};
  }
  return j.get<std::vector<double>>();
}

inline std::string start_text(const std::vector<double>& x0) {
  if (x0.empty()) return "corner start";
  std::string s = "x0=(";
  for (std::size_t i = 0; i < x0.size(); ++i) s += (i ? ", " : "") + fmt_short(x0[i]);
  return s + ")";
}

inline SimConfig sim_config(double dt) {
  SimConfig cfg;
  cfg.dt_max = dt;
  return cfg;
}

// ---------------------------------------------------------------------------------------------
// zeros

struct ZerosParams {
  std::string family = "hermite";
  int degree = 1;
  double alpha = 0.0;
};

inline void to_json(json& j, const ZerosParams& p) {
  j = json{{"family", p.family}, {"degree", p.degree}, {"alpha", p.alpha}};
}

inline void from_json(const json& j, ZerosParams& p) {
  j.at("family").get_to(p.family);
  j.at("degree").get_to(p.degree);
  j.at("alpha").get_to(p.alpha);
}

/// Ordered zeros with the residual of their equilibrium relation (Stieltjes for Hermite,
/// electrostatic with nu = alpha + 1 for Laguerre).
inline Output run(const ZerosParams& p) {
  if (p.degree < 1) throw ArgumentError("degree must be at least 1");
  std::vector<double> zeros;
  std::vector<double> residuals;
  if (p.family == "hermite") {
    zeros = hermite_zeros(p.degree).zeros;
    residuals = stieltjes_residuals(zeros);
  } else if (p.family == "laguerre") {
    zeros = laguerre_zeros(p.degree, p.alpha).zeros;
    residuals = electrostatic_residuals(zeros, p.alpha + 1.0);
  } else {
    throw ArgumentError("family must be hermite or laguerre, got '" + p.family + "'");
  }
  Output out;
  std::ostringstream csv, rep;
  csv << "index,zero,residual\n";
  double max_res = 0.0;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    csv << i + 1 << ',' << fmt(zeros[i]) << ',' << fmt(residuals[i]) << '\n';
    max_res = std::max(max_res, std::abs(residuals[i]));
  }
  rep << p.family << " degree " << p.degree;
  if (p.family == "laguerre") rep << " alpha " << fmt_short(p.alpha);
  rep << ": " << zeros.size() << " zeros, max |residual| " << fmt_short(max_res) << '\n';
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

// ---------------------------------------------------------------------------------------------
// simulate

struct SimulateParams {
  ModelArgs model;
  std::vector<double> x0;  // empty: corner start
  std::vector<double> t_grid{0.0, 0.25, 0.5, 1.0};
  double dt = 1e-3;
  std::size_t paths = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline void to_json(json& j, const SimulateParams& p) {
  j = json{{"model", p.model}, {"x0", x0_json(p.x0)}, {"t_grid", p.t_grid}, {"dt", p.dt},
           {"paths", p.paths}, {"seed", p.seed}, {"threads", p.threads}};
}

inline void from_json(const json& j, SimulateParams& p) {
  j.at("model").get_to(p.model);
  p.x0 = x0_from_json(j.at("x0"));
  j.at("t_grid").get_to(p.t_grid);
  j.at("dt").get_to(p.dt);
  j.at("paths").get_to(p.paths);
  j.at("seed").get_to(p.seed);
  j.at("threads").get_to(p.threads);
}

/// Normalized trajectories on the grid, one CSV row per (path, time).
inline Output run(const SimulateParams& p) {
  if (p.paths < 1) throw ArgumentError("paths must be at least 1");
  const auto spec = p.model.spec();
  const auto start = make_start(p.x0, p.model);
  const auto cfg = sim_config(p.dt);
  std::vector<std::optional<Trajectory>> paths(p.paths);
  parallel_for(p.paths, p.threads, [&](std::size_t i) {
    try {
      paths[i].emplace(simulate_path(start, p.t_grid, spec, cfg, p.seed, i));
    } catch (const ArgumentError&) {
      throw;
    } catch (const std::exception& ex) {
      throw PathError(i, ex.what());
    }
  });
  std::ostringstream csv;
  csv << "path_id,time";
  for (int i = 1; i <= p.model.n; ++i) csv << ",x_" << i;
  csv << '\n';
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& tr = *paths[i];
    for (std::size_t g = 0; g < tr.times.size(); ++g) {
      csv << i << ',' << fmt(tr.times[g]);
      for (double v : tr.states[g]) csv << ',' << fmt(v);
      csv << '\n';
    }
  }
  Output out;
  out.csv = csv.str();
  out.report = "simulated " + std::to_string(p.paths) + " paths (" + p.model.describe() + ", " + start_text(p.x0) +
               ") on " + std::to_string(p.t_grid.size()) + " grid times\n";
  return out;
}

// ---------------------------------------------------------------------------------------------
// martingale-check

struct MartingaleParams {
  ModelArgs model;
  int k = 1;
  std::vector<double> x0;
  std::vector<double> t_grid{0.0, 0.25, 0.5, 1.0};
  double dt = 1e-3;
  std::size_t paths = 20000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline void to_json(json& j, const MartingaleParams& p) {
  j = json{{"model", p.model}, {"k", p.k},          {"x0", x0_json(p.x0)}, {"t_grid", p.t_grid},
           {"dt", p.dt},       {"paths", p.paths}, {"seed", p.seed},      {"threads", p.threads}};
}

inline void from_json(const json& j, MartingaleParams& p) {
  j.at("model").get_to(p.model);
  j.at("k").get_to(p.k);
  p.x0 = x0_from_json(j.at("x0"));
  j.at("t_grid").get_to(p.t_grid);
  j.at("dt").get_to(p.dt);
  j.at("paths").get_to(p.paths);
  j.at("seed").get_to(p.seed);
  j.at("threads").get_to(p.threads);
}

inline Output run(const MartingaleParams& p) {
  const auto spec = p.model.spec();
  if (p.k < 1 || p.k > p.model.n) throw ArgumentError("k must be in [1, N]");
  const auto start = make_start(p.x0, p.model);
  const auto r = martingale_flatness(p.model.n, p.k, spec, start, p.t_grid, sim_config(p.dt),
                                     HarnessOptions{p.paths, p.seed, p.threads});
  std::ostringstream csv, rep;
  csv << "time,mean,std_error,reference,z\n";
  rep << "martingale check: " << p.model.describe() << ", k=" << p.k << ", " << start_text(p.x0) << ", "
      << p.paths << " paths\n";
  rep << "reference " << fmt_short(r.reference) << '\n';
  for (std::size_t g = 0; g < r.times.size(); ++g) {
    const double z = z_score(EstimateWithError{r.means[g], r.std_errors[g], p.paths}, r.reference);
    csv << fmt(r.times[g]) << ',' << fmt(r.means[g]) << ',' << fmt(r.std_errors[g]) << ',' << fmt(r.reference)
        << ',' << fmt(z) << '\n';
    rep << "  t=" << fmt_short(r.times[g]) << "  mean " << fmt_short(r.means[g]) << " +- "
        << fmt_short(r.std_errors[g]) << "  z " << fmt_short(z) << '\n';
  }
  rep << "max_z " << fmt_short(r.max_z) << " -> " << (r.passed() ? "PASS" : "FAIL") << '\n';
  return {r.passed() ? kOk : kFail, rep.str(), csv.str()};
}

// ---------------------------------------------------------------------------------------------
// charpoly

struct CharpolyParams {
  ModelArgs model;
  double t = 1.0;
  std::vector<double> ys{0.0, 1.0, 2.0};
  double dt = 1e-3;
  std::size_t paths = 20000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline void to_json(json& j, const CharpolyParams& p) {
  j = json{{"model", p.model}, {"t", p.t},         {"y", p.ys},           {"dt", p.dt},
           {"paths", p.paths}, {"seed", p.seed}, {"threads", p.threads}};
}

inline void from_json(const json& j, CharpolyParams& p) {
  j.at("model").get_to(p.model);
  j.at("t").get_to(p.t);
  j.at("y").get_to(p.ys);
  j.at("dt").get_to(p.dt);
  j.at("paths").get_to(p.paths);
  j.at("seed").get_to(p.seed);
  j.at("threads").get_to(p.threads);
}

/// Corner-start expected characteristic polynomial; closed form only when paths = 0.
inline Output run(const CharpolyParams& p) {
  if (!(p.t > 0.0)) throw ArgumentError("t must be positive");
  const auto spec = p.model.spec();
  if (spec.beta_infinite()) throw ArgumentError("charpoly requires finite beta");
  std::ostringstream csv, rep;
  rep << "expected characteristic polynomial: " << p.model.describe() << ", corner start, t=" << fmt_short(p.t);
  if (p.paths == 0) {
    rep << '\n';
    csv << "y,closed_form\n";
    for (double y : p.ys) {
      const double cf = expected_charpoly(spec, p.model.n, p.t, y);
      csv << fmt(y) << ',' << fmt(cf) << '\n';
      rep << "  y=" << fmt_short(y) << "  " << fmt_short(cf) << '\n';
    }
    return {kOk, rep.str(), csv.str()};
  }
  rep << ", " << p.paths << " paths\n";
  const auto rows = charpoly_check(p.model.n, spec, p.t, p.ys, sim_config(p.dt),
                                   HarnessOptions{p.paths, p.seed, p.threads});
  csv << "y,estimate,std_error,closed_form,z\n";
  bool ok = true;
  for (const auto& r : rows) {
    csv << fmt(r.y) << ',' << fmt(r.estimate.mean) << ',' << fmt(r.estimate.std_error) << ','
        << fmt(r.closed_form) << ',' << fmt(r.z) << '\n';
    rep << "  y=" << fmt_short(r.y) << "  mc " << fmt_short(r.estimate.mean) << " +- "
        << fmt_short(r.estimate.std_error) << "  closed form " << fmt_short(r.closed_form) << "  z "
        << fmt_short(r.z) << '\n';
    ok = ok && r.z <= kZThreshold;
  }
  rep << (ok ? "PASS" : "FAIL") << '\n';
  return {ok ? kOk : kFail, rep.str(), csv.str()};
}

// ---------------------------------------------------------------------------------------------
// oracle

struct OracleParams {
  ModelArgs model;
  double t = 1.0;
  std::vector<int> ks;  // empty: 1..N
  std::size_t samples = 100000;
  double proposal_scale = 1.5;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline void to_json(json& j, const OracleParams& p) {
  j = json{{"model", p.model},
           {"t", p.t},
           {"k", p.ks},
           {"samples", p.samples},
           {"proposal_scale", p.proposal_scale},
           {"seed", p.seed},
           {"threads", p.threads}};
}

inline void from_json(const json& j, OracleParams& p) {
  j.at("model").get_to(p.model);
  j.at("t").get_to(p.t);
  j.at("k").get_to(p.ks);
  j.at("samples").get_to(p.samples);
  j.at("proposal_scale").get_to(p.proposal_scale);
  j.at("seed").get_to(p.seed);
  j.at("threads").get_to(p.threads);
}

/// Raw-coordinate e_k (type A) or e_k of squares (type B).
inline RawObservable moment_observable(RootSystem system, int k) {
  if (system == RootSystem::A) return [k](std::span<const double> x) { return elem_sym(k, x); };
  return [k](std::span<const double> x) { return elem_sym(k, squared(x)); };
}

inline double expected_moment(const ModelSpec& spec, int n, double t, int k) {
  return spec.system() == RootSystem::A ? expected_elem_sym_A(n, spec.beta(), t, k)
                                        : expected_elem_sym_B(n, spec.beta(), spec.nu(), t, k);
}

inline Output run(const OracleParams& p) {
  const auto spec = p.model.spec();
  std::vector<int> ks = p.ks;
  if (ks.empty()) {
    for (int k = 1; k <= p.model.n; ++k) ks.push_back(k);
  }
  std::vector<RawObservable> obs;
  for (int k : ks) {
    if (k < 1 || k > p.model.n) throw ArgumentError("k must be in [1, N]");
    obs.push_back(moment_observable(spec.system(), k));
  }
  OracleConfig cfg;
  cfg.samples = p.samples;
  cfg.proposal_scale = p.proposal_scale;
  cfg.seed = p.seed;
  cfg.threads = p.threads;
  const auto res = is_expectations(obs, p.model.n, spec, p.t, cfg);
  std::ostringstream csv, rep;
  rep << "importance-sampling oracle: " << p.model.describe() << ", t=" << fmt_short(p.t) << ", " << p.samples
      << " samples, effective sample size " << fmt_short(res.effective_sample_size) << '\n';
  csv << "k,estimate,std_error,closed_form,z\n";
  bool ok = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& e = res.estimates[i];
    const double cf = expected_moment(spec, p.model.n, p.t, ks[i]);
    const double z = z_score(e, cf);
    csv << ks[i] << ',' << fmt(e.mean) << ',' << fmt(e.std_error) << ',' << fmt(cf) << ',' << fmt(z) << '\n';
    rep << "  k=" << ks[i] << "  oracle " << fmt_short(e.mean) << " +- " << fmt_short(e.std_error)
        << "  closed form " << fmt_short(cf) << "  z " << fmt_short(z) << '\n';
    ok = ok && z <= kZThreshold;
  }
  rep << (ok ? "PASS" : "FAIL") << '\n';
  return {ok ? kOk : kFail, rep.str(), csv.str()};
}

// ---------------------------------------------------------------------------------------------
// harmonic-check

struct HarmonicParams {
  ModelArgs model;
  int k = 1;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
};

inline void to_json(json& j, const HarmonicParams& p) {
  j = json{{"model", p.model}, {"k", p.k}, {"trials", p.trials}, {"seed", p.seed}};
}

inline void from_json(const json& j, HarmonicParams& p) {
  j.at("model").get_to(p.model);
  j.at("k").get_to(p.k);
  j.at("trials").get_to(p.trials);
  j.at("seed").get_to(p.seed);
}

/// Random interior point: sorted uniforms on [-2.5, 2.5] (absolute values for type B),
/// spread so neighbouring coordinates and the wall are at least 0.05 apart.
inline std::vector<double> random_interior_point(int n, RootSystem system, NormalStream& draw) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = 5.0 * draw.uniform() - 2.5;
  project_in_place(x, system);
  const double base = system == RootSystem::B ? 0.05 : 0.0;
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += base + 0.05 * (n - 1 - i);
  return x;
}

struct HarmonicResult {
  double max_relative = 0.0;  // max |residual| / scale
  double max_absolute = 0.0;
};

inline HarmonicResult harmonic_residuals(const ModelSpec& spec, int n, int k, std::size_t trials,
                                         std::uint64_t seed) {
  if (spec.beta_infinite()) throw ArgumentError("harmonic-check requires finite beta");
  if (k < 1 || k > n) throw ArgumentError("k must be in [1, N]");
  HarmonicResult out;
  const SpaceTimeFunction f = [spec, n, k](std::span<const double> x, double t) {
    return compensator(spec, n, k, t, x);
  };
  for (std::size_t i = 0; i < trials; ++i) {
    NormalStream draw(seed, i);
    const auto x = random_interior_point(n, spec.system(), draw);
    const double t = 0.05 + 1.95 * draw.uniform();
    // Richardson-extrapolated differences: the O(h^2) error is amplified by the 1/x wall drift
    const auto terms = generator_terms(f, x, t, spec, 0.0, true);
    out.max_relative = std::max(out.max_relative, std::abs(terms.value()) / terms.scale);
    out.max_absolute = std::max(out.max_absolute, std::abs(terms.value()));
  }
  return out;
}

inline Output run(const HarmonicParams& p) {
  if (p.trials < 1) throw ArgumentError("trials must be at least 1");
  const auto spec = p.model.spec();
  const auto r = harmonic_residuals(spec, p.model.n, p.k, p.trials, p.seed);
  const bool ok = r.max_relative < kHarmonicTolerance;
  std::ostringstream csv, rep;
  csv << "trials,max_relative_residual,max_absolute_residual,tolerance\n";
  csv << p.trials << ',' << fmt(r.max_relative) << ',' << fmt(r.max_absolute) << ',' << fmt(kHarmonicTolerance)
      << '\n';
  rep << "space-time harmonicity: " << p.model.describe() << ", k=" << p.k << ", " << p.trials
      << " points: max residual/scale " << fmt_short(r.max_relative) << " (absolute "
      << fmt_short(r.max_absolute) << ") -> " << (ok ? "PASS" : "FAIL") << '\n';
  return {ok ? kOk : kFail, rep.str(), csv.str()};
}

// ---------------------------------------------------------------------------------------------
// manifests

inline std::uint64_t seed_of(const ZerosParams&) { return 0; }
template <class P>
std::uint64_t seed_of(const P& p) {
  return p.seed;
}

template <class P>
json make_manifest(const std::string& command, const P& params, double wall_clock_seconds) {
  return json{{"command", command},
              {"params", params},
              {"seed", seed_of(params)},
              {"version", kVersion},
              {"wall_clock_seconds", wall_clock_seconds}};
}

/// Calls f(command, params) with the typed parameters recorded in a manifest.
template <class F>
auto dispatch(const json& manifest, F&& f) {
  const auto command = manifest.at("command").get<std::string>();
  const auto& params = manifest.at("params");
  if (command == "zeros") return f(command, params.get<ZerosParams>());
  if (command == "simulate") return f(command, params.get<SimulateParams>());
  if (command == "martingale-check") return f(command, params.get<MartingaleParams>());
  if (command == "charpoly") return f(command, params.get<CharpolyParams>());
  if (command == "oracle") return f(command, params.get<OracleParams>());
  if (command == "harmonic-check") return f(command, params.get<HarmonicParams>());
  throw ArgumentError("manifest names unknown command '" + command + "'");
}

/// Re-runs the command recorded in a manifest.
inline Output replay(const json& manifest) {
  return dispatch(manifest, [](const std::string&, const auto& params) { return run(params); });
}

/// Commands whose primary product is a table rather than a verdict.
inline bool is_tabular(const std::string& command) { return command == "zeros" || command == "simulate"; }

}  // namespace weylbessel::cli
