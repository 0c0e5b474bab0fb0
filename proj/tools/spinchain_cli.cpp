// Command-line front end: `sweep` runs (model, n, beta) grids through one of
// the three engines and writes CSV, `fit` extracts law parameters from a
// sweep CSV, `check` runs the cross-engine equivalence suite.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spinchain/sweep.hpp"

namespace {

void print_error_line(const std::string& code, const std::string& detail) {
  nlohmann::json j;
  j["error"] = code;
  j["detail"] = detail;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermal-state complexity toolkit for 1D spin chains"};
  app.require_subcommand(1);

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "run a (model, n, beta) grid and write CSV");
  sweep->set_config("--config", "", "key=value config file; command-line flags win");
  std::string engine_s = "freefermion", family_s = "xy", field_pattern_s = "zero";
  std::string beta_scale = "geometric";
  spinchain::RunConfig cfg;
  std::vector<double> fit_window;
  sweep->add_option("--engine", engine_s, "freefermion | mpo | oracle");
  sweep->add_option("--family", family_s, "xy | tilted_ising | xxz");
  sweep->add_option("--n", cfg.n, "chain length");
  sweep->add_option("--n_list", cfg.n_list, "sweep these chain lengths instead of --n");
  sweep->add_option("--gamma", cfg.gamma, "XY anisotropy");
  sweep->add_option("--h", cfg.h, "XY transverse field");
  sweep->add_option("--hx", cfg.hx, "tilted-Ising x field");
  sweep->add_option("--hz", cfg.hz, "tilted-Ising z field");
  sweep->add_option("--delta", cfg.delta, "XXZ anisotropy");
  sweep->add_option("--field_pattern", field_pattern_s, "zero | staggered | list (XXZ)");
  sweep->add_option("--field_values", cfg.field_values, "per-site fields for field_pattern=list");
  sweep->add_option("--beta_list", cfg.beta_grid.explicit_list, "explicit beta grid");
  sweep->add_option("--beta_min", cfg.beta_grid.lo, "grid start");
  sweep->add_option("--beta_max", cfg.beta_grid.hi, "grid end");
  sweep->add_option("--beta_points", cfg.beta_grid.points, "number of grid points");
  sweep->add_option("--beta_scale", beta_scale, "geometric | linear");
  sweep->add_option("--cut", cfg.cut, "bipartition n_A (default n/2)");
  sweep->add_option("--epsilon", cfg.mpo.epsilon, "imaginary-time step");
  sweep->add_option("--d_max", cfg.mpo.d_max, "bond dimension cap");
  sweep->add_option("--svd_cut", cfg.mpo.svd_cut, "relative singular-value cutoff");
  sweep->add_option("--reorth_every", cfg.mpo.reorth_every, "reorthogonalize every k steps");
  sweep->add_option("--checkpoint", cfg.mpo.checkpoint, "MPO checkpoint path (resume + save)");
  sweep->add_flag("--fit", cfg.fit.enabled, "fit the log law after the sweep");
  sweep->add_option("--fit_window", fit_window, "beta window for --fit")->expected(2);
  sweep->add_option("--output", cfg.output, "CSV output path");
  sweep->add_option("--gap_csv", cfg.gap_csv, "sidecar n,gap CSV (freefermion)");

  // --- fit ---
  auto* fit = app.add_subcommand("fit", "fit a law to a sweep CSV");
  std::string fit_csv, law_s = "log_beta";
  std::vector<double> window{4.0, 64.0};
  fit->add_option("--csv", fit_csv, "input CSV")->required();
  fit->add_option("--law", law_s, "log_beta | gap_exp");
  fit->add_option("--window", window, "fit window (beta for log_beta, n for gap_exp)")
      ->expected(2);

  // --- check ---
  auto* check = app.add_subcommand("check", "run the cross-engine equivalence suite");
  unsigned seed = 12345;
  check->add_option("--seed", seed, "random spec seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      cfg.engine = spinchain::parse_engine(engine_s);
      cfg.family = spinchain::parse_family(family_s);
      cfg.field_pattern = spinchain::parse_field_pattern(field_pattern_s);
      if (beta_scale == "linear")
        cfg.beta_grid.geometric = false;
      else if (beta_scale != "geometric")
        throw std::invalid_argument("beta_scale must be geometric or linear");
      if (!fit_window.empty()) {
        cfg.fit.window_lo = fit_window[0];
        cfg.fit.window_hi = fit_window[1];
      }
      const spinchain::SweepOutcome out = spinchain::run_sweep(cfg);
      std::cout << "wrote " << out.csv_path << " (" << out.rows << " rows)\n";
      if (out.fit)
        std::cout << "fit: c=" << out.fit->c << " c_prime=" << out.fit->c_prime
                  << " residual=" << out.fit->rms_residual << "\n";
    } else if (fit->parsed()) {
      const auto law = spinchain::parse_fit_law(law_s);
      const auto res = spinchain::fit_command(fit_csv, law, window[0], window[1]);
      if (law == spinchain::FitLaw::LogBeta)
        std::cout << "c=" << res.c << " c_prime=" << res.c_prime
                  << " residual=" << res.residual << " points=" << res.points << "\n";
      else
        std::cout << "xi=" << res.xi << " residual=" << res.residual
                  << " points=" << res.points << "\n";
    } else if (check->parsed()) {
      const auto results = spinchain::run_equivalence_checks(seed);
      bool all_ok = true;
      for (const auto& r : results) {
        std::cout << (r.passed ? "ok   " : "FAIL ") << r.name << "  (observed " << r.observed
                  << ", bound " << r.bound << ")\n";
        all_ok = all_ok && r.passed;
      }
      if (!all_ok) {
        print_error_line("check_failed", "cross-engine equivalence suite failed");
        return 1;
      }
    }
  } catch (const std::invalid_argument& e) {
    print_error_line("usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error_line("runtime", e.what());
    return 1;
  }
  return 0;
}
