#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace weylbessel::cli {

namespace detail {

inline std::vector<double> parse_x0(const std::vector<std::string>& tokens) {
  if (tokens.empty() || (tokens.size() == 1 && tokens[0] == "corner")) return {};
  std::vector<double> x;
  for (const auto& s : tokens) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || s.empty()) throw ArgumentError("x0 must be a list of numbers or 'corner', got '" + s + "'");
    x.push_back(v);
  }
  return x;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ArgumentError("failed writing '" + path + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

/// Runs a command, then routes its outputs: with --out the table goes to the file plus a
/// manifest sidecar and the report to stdout; without it tabular commands print the table.
template <class P>
int execute(const std::string& command, const P& params, const std::string& out_path, bool tabular,
            std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Output result = run(params);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out_path.empty()) {
    out << (tabular ? result.csv : result.report);
  } else {
    write_file(out_path, result.csv);
    auto manifest = make_manifest(command, params, secs);
    manifest["output"] = out_path;
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
    out << result.report;
  }
  return result.exit_code;
}

struct ModelFlags {
  ModelArgs model;
  std::string beta = "1";

  void add(CLI::App* app) {
    app->add_option("--system", model.system, "Root system: A or B")->capture_default_str();
    app->add_option("-N,--n", model.n, "Number of particles")->capture_default_str();
    app->add_option("--beta", beta, "Multiplicity beta > 0, or 'inf'")->capture_default_str();
    app->add_option("--nu", model.nu, "Wall parameter nu >= 0 (type B)")->capture_default_str();
  }

  ModelArgs resolve() const {
    ModelArgs m = model;
    m.beta = parse_beta(beta);
    return m;
  }
};

}  // namespace detail

/// Command-line entry point; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Multivariate Bessel processes: simulation, martingale and closed-form checks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string out_path;
  std::function<int()> action;

  // zeros
  ZerosParams zp;
  auto* zeros = app.add_subcommand("zeros", "Hermite or Laguerre zeros with equilibrium residuals");
  zeros->add_option("--family", zp.family, "hermite or laguerre")->capture_default_str();
  zeros->add_option("--degree", zp.degree, "Polynomial degree N >= 1")->required();
  zeros->add_option("--alpha", zp.alpha, "Laguerre parameter alpha > -1")->capture_default_str();
  zeros->add_option("--out", out_path, "CSV output file");
  zeros->callback([&] { action = [&] { return detail::execute("zeros", zp, out_path, is_tabular("zeros"), out); }; });

  // simulate
  SimulateParams sp;
  detail::ModelFlags sim_model;
  std::vector<std::string> sim_x0{"corner"};
  auto* simulate = app.add_subcommand("simulate", "Simulate normalized paths and write them as CSV");
  sim_model.add(simulate);
  simulate->add_option("--x0", sim_x0, "Start point (comma list) or 'corner'")->delimiter(',');
  simulate->add_option("--t-grid", sp.t_grid, "Output times")->delimiter(',')->capture_default_str();
  simulate->add_option("--dt", sp.dt, "Maximal Euler step")->capture_default_str();
  simulate->add_option("--paths", sp.paths, "Number of paths")->capture_default_str();
  simulate->add_option("--seed", sp.seed, "Master seed")->capture_default_str();
  simulate->add_option("--threads", sp.threads, "Worker threads (0 = all cores)")->capture_default_str();
  simulate->add_option("--out", out_path, "CSV output file");
  simulate->callback([&] {
    sp.model = sim_model.resolve();
    sp.x0 = detail::parse_x0(sim_x0);
    action = [&] { return detail::execute("simulate", sp, out_path, is_tabular("simulate"), out); };
  });

  // martingale-check
  MartingaleParams mp;
  detail::ModelFlags mart_model;
  std::vector<std::string> mart_x0{"corner"};
  auto* mart = app.add_subcommand("martingale-check", "Monte-Carlo flatness of the compensated e_k");
  mart_model.add(mart);
  mart->add_option("-k,--k", mp.k, "Order k in [1, N]")->required();
  mart->add_option("--x0", mart_x0, "Start point (comma list) or 'corner'")->delimiter(',');
  mart->add_option("--t-grid", mp.t_grid, "Check times")->delimiter(',')->capture_default_str();
  mart->add_option("--dt", mp.dt, "Maximal Euler step")->capture_default_str();
  mart->add_option("--paths", mp.paths, "Number of paths")->capture_default_str();
  mart->add_option("--seed", mp.seed, "Master seed")->capture_default_str();
  mart->add_option("--threads", mp.threads, "Worker threads (0 = all cores)")->capture_default_str();
  mart->add_option("--out", out_path, "CSV output file");
  mart->callback([&] {
    mp.model = mart_model.resolve();
    mp.x0 = detail::parse_x0(mart_x0);
    action = [&] { return detail::execute("martingale-check", mp, out_path, false, out); };
  });

  // charpoly
  CharpolyParams cp;
  detail::ModelFlags cp_model;
  auto* charpoly = app.add_subcommand("charpoly", "Expected characteristic polynomial from the corner");
  cp_model.add(charpoly);
  charpoly->add_option("-t,--t", cp.t, "Time t > 0")->capture_default_str();
  charpoly->add_option("--y", cp.ys, "Evaluation points")->delimiter(',')->capture_default_str();
  charpoly->add_option("--dt", cp.dt, "Maximal Euler step")->capture_default_str();
  charpoly->add_option("--paths", cp.paths, "Number of paths (0 = closed form only)")->capture_default_str();
  charpoly->add_option("--seed", cp.seed, "Master seed")->capture_default_str();
  charpoly->add_option("--threads", cp.threads, "Worker threads (0 = all cores)")->capture_default_str();
  charpoly->add_option("--out", out_path, "CSV output file");
  charpoly->callback([&] {
    cp.model = cp_model.resolve();
    action = [&] { return detail::execute("charpoly", cp, out_path, false, out); };
  });

  // oracle
  OracleParams op;
  detail::ModelFlags or_model;
  auto* oracle = app.add_subcommand("oracle", "Importance-sampling moments from the corner-start density");
  or_model.add(oracle);
  oracle->add_option("-t,--t", op.t, "Time t > 0")->capture_default_str();
  oracle->add_option("-k,--k", op.ks, "Orders (default 1..N)")->delimiter(',');
  oracle->add_option("--samples", op.samples, "Number of proposal draws")->capture_default_str();
  oracle->add_option("--proposal-scale", op.proposal_scale, "Proposal widening factor > 1")->capture_default_str();
  oracle->add_option("--seed", op.seed, "Master seed")->capture_default_str();
  oracle->add_option("--threads", op.threads, "Worker threads (0 = all cores)")->capture_default_str();
  oracle->add_option("--out", out_path, "CSV output file");
  oracle->callback([&] {
    op.model = or_model.resolve();
    action = [&] { return detail::execute("oracle", op, out_path, false, out); };
  });

  // harmonic-check
  HarmonicParams hp;
  detail::ModelFlags hm_model;
  auto* harmonic = app.add_subcommand("harmonic-check", "Finite-difference generator residual of a compensator");
  hm_model.add(harmonic);
  harmonic->add_option("-k,--k", hp.k, "Order k in [1, N]")->required();
  harmonic->add_option("--trials", hp.trials, "Number of random interior points")->capture_default_str();
  harmonic->add_option("--seed", hp.seed, "Master seed")->capture_default_str();
  harmonic->add_option("--out", out_path, "CSV output file");
  harmonic->callback([&] {
    hp.model = hm_model.resolve();
    action = [&] { return detail::execute("harmonic-check", hp, out_path, false, out); };
  });

  // replay
  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("--manifest", manifest_path, "Manifest file")->required();
  replay_cmd->add_option("--out", out_path, "Output file (default: the manifest's)");
  replay_cmd->callback([&] {
    action = [&] {
      const auto manifest = json::parse(detail::read_file(manifest_path));
      const std::string target = out_path.empty() ? manifest.value("output", std::string()) : out_path;
      return dispatch(manifest, [&](const std::string& command, const auto& params) {
        return detail::execute(command, params, target, is_tabular(command), out);
      });
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    return action();
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SingularInputError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "usage error: malformed manifest: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace weylbessel::cli
