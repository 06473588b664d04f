#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "archinf/errors.hpp"
#include "archinf/ged.hpp"
#include "archinf/inference.hpp"
#include "archinf/model_io.hpp"
#include "archinf/montecarlo.hpp"
#include "archinf/process.hpp"
#include "archinf/weights.hpp"

namespace {

using namespace archinf;

// Exit codes: 0 ok, 2 configuration, 3 variance overflow, 4 fit did not
// converge (result still written), 5 singular Hessian.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitNoConverge = 4;
constexpr int kExitSingular = 5;

struct RhoGrid {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

RhoGrid parse_rho_grid(const std::string& s) {
  RhoGrid g;
  char colon1 = 0, colon2 = 0;
  std::istringstream is(s);
  if (!(is >> g.lo >> colon1 >> g.hi >> colon2 >> g.step) || colon1 != ':' ||
      colon2 != ':')
    throw config_error("--rho-grid: expected LO:HI:STEP");
  if (!(g.step > 0.0) || !(g.lo <= g.hi))
    throw config_error("--rho-grid: need LO <= HI and STEP > 0");
  if (!(g.lo > 0.0 && g.hi < 1.0))
    throw config_error("--rho-grid: grid must lie inside (0,1)");
  return g;
}

int cmd_simulate(const std::string& model_path, long T, long burn, long seed,
                 long nw, bool allow_nonstat, const std::string& out_path) {
  ModelFile mf = load_model_file(model_path);
  SimConfig cfg;
  cfg.spec = mf.spec;
  cfg.theta0 = mf.theta;
  cfg.gamma = mf.gamma;
  cfg.sample_size = T;
  cfg.burn_in = burn;
  cfg.n_weights = nw;
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.allow_nonstationary = allow_nonstat;
  Series y = simulate(cfg);
  write_series_csv(out_path, y);
  return kExitOk;
}

int cmd_fit(const std::string& model_path, const std::string& data_path,
            double level, long seed, int starts, int max_iter, long nw,
            const std::string& out_path) {
  ModelFile mf = load_model_file(model_path);
  if (!mf.has_bounds) throw config_error("bounds: missing (required for fit)");
  Series y = read_series_csv(data_path);

  FitOptions opts;
  opts.seed = static_cast<std::uint64_t>(seed);
  opts.n_starts = starts;
  opts.max_iter = max_iter;
  opts.n_weights = nw;

  FitResult fr = fit(y, mf.spec, mf.theta.bounds, opts);

  InferenceResult inf;
  bool have_inf = false;
  std::vector<double> hess_eigs;
  if (fr.converged) {
    try {
      inf = sandwich(fr, static_cast<long>(y.size()), level);
      have_inf = true;
    } catch (const singular_hessian_error& e) {
      hess_eigs = e.eigenvalues();
    }
  }

  nlohmann::json j = fit_to_json(fr, have_inf ? &inf : nullptr);
  if (!hess_eigs.empty()) j["diagnostics"]["hessian_eigenvalues"] = hess_eigs;
  write_text_atomic(out_path, j.dump(2) + "\n");

  if (!fr.converged) return kExitNoConverge;
  if (!have_inf) return kExitSingular;
  return kExitOk;
}

int cmd_check(const std::string& model_path, const std::string& grid_text, long nw) {
  ModelFile mf = load_model_file(model_path);
  RhoGrid grid = parse_rho_grid(grid_text);
  std::ostringstream os;
  os << "rho\tmoment_factor\tweight_sum\tvalue\ttail_bound\tverdict\n";
  for (double rho = grid.lo; rho <= grid.hi + 1e-12; rho += grid.step) {
    MomentConditionRecord rec =
        moment_condition(mf.spec, mf.theta.zeta, mf.gamma, rho, nw);
    os << format_g17(rec.rho) << '\t' << format_g17(rec.moment_factor) << '\t'
       << format_g17(rec.weight_sum) << '\t' << format_g17(rec.value) << '\t'
       << format_g17(rec.tail_bound) << '\t' << verdict_name(rec.verdict) << '\n';
  }
  std::cout << os.str();
  return kExitOk;
}

int cmd_weights(const std::string& model_path, long n, int derivs) {
  ModelFile mf = load_model_file(model_path);
  WeightSet ws = weight_set(mf.spec, mf.theta.zeta, n, derivs, false);
  const int r = mf.spec.zeta_dim();
  const auto zeta_names = [&] {
    auto all = mf.spec.coord_names();
    return std::vector<std::string>(all.begin() + 2, all.end());
  }();

  std::ostringstream os;
  os << "j,psi";
  if (derivs >= 1)
    for (const auto& nm : zeta_names) os << ",d_" << nm;
  if (derivs >= 2)
    for (int k = 0; k < r; ++k)
      for (int l = k; l < r; ++l) os << ",d2_" << zeta_names[k] << '_' << zeta_names[l];
  os << '\n';
  for (long j = 0; j < n; ++j) {
    os << (j + 1) << ',' << format_g17(ws.psi[j]);
    if (derivs >= 1)
      for (int k = 0; k < r; ++k) os << ',' << format_g17(ws.jac[k][j]);
    if (derivs >= 2)
      for (int k = 0; k < r; ++k)
        for (int l = k; l < r; ++l)
          os << ',' << format_g17(ws.hess[WeightSet::pack(k, l, r)][j]);
    os << '\n';
  }
  std::cout << os.str();
  return kExitOk;
}

int cmd_mc(const std::string& config_path, const std::string& out_path, int threads) {
  MCConfig cfg = load_mc_config(config_path);
  if (threads >= 0) cfg.threads = threads;
  MCReport report = run_mc(cfg);
  write_text_atomic(out_path, mc_report_to_json(report, cfg).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ARCH(infinity) conditional-heteroscedasticity toolkit"};
  app.require_subcommand(1);

  std::string model_path, data_path, out_path, config_path, grid_text;
  long T = 0, burn = -1, seed = 0, nw = 10000, nw_check = 100;
  double level = 0.95;
  int starts = 5, max_iter = 500, derivs = 0, threads = -1;
  bool allow_nonstat = false;

  auto* sim = app.add_subcommand("simulate", "simulate a path and write CSV");
  sim->add_option("--model", model_path, "model JSON file")->required();
  sim->add_option("--T", T, "observations to emit")->required();
  sim->add_option("--burn", burn, "burn-in steps (-1 = 10*nw capped at 1e5)");
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--nw", nw, "weight truncation length");
  sim->add_flag("--allow-nonstationary", allow_nonstat,
                "proceed when the weights sum to >= 1");
  sim->add_option("--out", out_path, "output CSV path")->required();

  auto* fit_cmd = app.add_subcommand("fit", "estimate parameters from a CSV series");
  fit_cmd->add_option("--model", model_path, "model JSON file (with bounds)")->required();
  fit_cmd->add_option("--data", data_path, "input CSV with a y column")->required();
  fit_cmd->add_option("--level", level, "confidence level");
  fit_cmd->add_option("--seed", seed, "multi-start seed");
  fit_cmd->add_option("--starts", starts, "number of starts");
  fit_cmd->add_option("--max-iter", max_iter, "iteration cap per start");
  fit_cmd->add_option("--nw", nw, "lag window for the likelihood (-1 = full history)");
  fit_cmd->add_option("--out", out_path, "output JSON path")->required();

  auto* check = app.add_subcommand("check", "moment-condition scan over rho");
  check->add_option("--model", model_path, "model JSON file")->required();
  check->add_option("--rho-grid", grid_text, "grid as LO:HI:STEP")->required();
  check->add_option("--nw", nw_check, "weight truncation length")->required();

  auto* wts = app.add_subcommand("weights", "print the weight sequence as CSV");
  wts->add_option("--model", model_path, "model JSON file")->required();
  wts->add_option("--n", T, "number of weights")->required();
  wts->add_option("--derivs", derivs, "derivative order 0|1|2")
      ->check(CLI::Range(0, 2));

  auto* mc = app.add_subcommand("mc", "replication study from a JSON config");
  mc->add_option("--config", config_path, "mc config JSON")->required();
  mc->add_option("--out", out_path, "output JSON path")->required();
  mc->add_option("--threads", threads, "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(model_path, T, burn, seed, nw, allow_nonstat, out_path);
    if (fit_cmd->parsed()) {
      const long fit_nw = fit_cmd->count("--nw") ? nw : -1;
      return cmd_fit(model_path, data_path, level, seed, starts, max_iter, fit_nw,
                     out_path);
    }
    if (check->parsed()) return cmd_check(model_path, grid_text, nw_check);
    if (wts->parsed()) return cmd_weights(model_path, T, derivs);
    if (mc->parsed()) return cmd_mc(config_path, out_path, threads);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const simulation_overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const singular_hessian_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const positivity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const stability_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
