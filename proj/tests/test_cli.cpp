#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "spinchain/sweep.hpp"

#ifndef SPINCHAIN_CLI_PATH
#error "SPINCHAIN_CLI_PATH must be defined by the build"
#endif

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "spinchain_cli_test.log";
  const std::string cmd = std::string(SPINCHAIN_CLI_PATH) + " " + args + " > " +
                          log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream is(log);
  std::string output((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  fs::remove(log);
  return {WEXITSTATUS(raw), output};
}

}  // namespace

TEST_CASE("sweep subcommand writes CSV", "[cli]") {
  const fs::path out = fs::temp_directory_path() / "cli_sweep.csv";
  const auto res = run_cli("sweep --engine oracle --family xy --n 4 --gamma 0.5 --h 0.9 "
                           "--beta_list 0.5 1 --output " + out.string());
  INFO(res.output);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(out));
  const auto rows = spinchain::read_csv_pairs(out.string(), "beta", "s_sharp");
  CHECK(rows.size() == 2);
  fs::remove(out);
}

TEST_CASE("flags override the config file", "[cli]") {
  const fs::path cfg = fs::temp_directory_path() / "cli_cfg.ini";
  const fs::path out = fs::temp_directory_path() / "cli_cfg_out.csv";
  {
    std::ofstream os(cfg);
    os << "engine=oracle\nfamily=xy\nn=4\ngamma=0.5\nh=0.9\n"
       << "beta_list=0.5 1\noutput=" << out.string() << "\n";
  }
  const auto res = run_cli("sweep --config " + cfg.string() + " --n 5");
  INFO(res.output);
  CHECK(res.exit_code == 0);
  std::ifstream is(out);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(row.find("oracle,xy,5,2,") == 0);  // flag --n 5 wins over config n=4
  fs::remove(cfg);
  fs::remove(out);
}

TEST_CASE("fit subcommand prints parameters", "[cli]") {
  const fs::path csv = fs::temp_directory_path() / "cli_fit.csv";
  {
    std::ofstream os(csv);
    os << spinchain::kCsvHeader << "\n";
    for (const double b : {1.0, 2.0, 4.0, 8.0})
      os << "freefermion,xy,8,4," << b << "," << (std::log2(b) / 3.0 + 1.0)
         << ",,,,,,,,,,0\n";
  }
  const auto res = run_cli("fit --csv " + csv.string() + " --law log_beta --window 1 8");
  INFO(res.output);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("c=1") != std::string::npos);
  fs::remove(csv);
}

TEST_CASE("usage errors exit nonzero with a machine-readable line", "[cli]") {
  const auto res = run_cli("sweep --engine nosuch --family xy --n 4");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("{\"detail\"") != std::string::npos);
  CHECK(res.output.find("unknown engine") != std::string::npos);

  const auto res2 = run_cli("sweep --engine freefermion --family xxz --n 8");
  CHECK(res2.exit_code == 2);

  const auto res3 = run_cli("fit --csv /does/not/exist.csv");
  CHECK(res3.exit_code == 1);
}

TEST_CASE("check subcommand runs the equivalence suite", "[cli]") {
  const auto res = run_cli("check --seed 7");
  INFO(res.output);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("ok   freefermion_vs_oracle") != std::string::npos);
  CHECK(res.output.find("ok   mpo_vs_oracle") != std::string::npos);
  CHECK(res.output.find("ok   mpo_vs_freefermion_osee") != std::string::npos);
}
