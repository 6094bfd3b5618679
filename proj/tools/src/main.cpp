// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "limabs/io/commands.hpp"

using namespace limabs::io;

int main(int argc, char** argv) {
  CLI::App app{"Limiting absorption solver for time-harmonic Maxwell problems"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir = ".";
  int threads = 0;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "TOML configuration file")->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_dir, "Output directory");
  app.add_option("-j,--threads", threads, "Worker threads (default: LIMABS_THREADS or 1)")->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  app.add_flag("-q,--quiet", quiet, "Only print failures and the summary");

  auto* solve = app.add_subcommand("solve", "Solve the resolvent equation at the configured frequency");
  auto* limit = app.add_subcommand("limit", "Run the limiting absorption schedule");
  auto* spectrum = app.add_subcommand("spectrum", "Eigenpairs near omega0");
  auto* decompose = app.add_subcommand("decompose", "Helmholtz split of a seeded random field");
  auto* helmholtz = app.add_subcommand("helmholtz", "Scalar Helmholtz resolvent sweep");
  auto* verify = app.add_subcommand("verify", "Run a self-check suite");
  std::string suite = "all";
  verify->add_option("suite", suite, "operators, resolvent, limabs, decomposition, helmholtz, oracles or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (threads == 0) {
      if (const char* env = std::getenv("LIMABS_THREADS")) threads = std::max(1, std::atoi(env));
      else threads = 1;
    }
    Eigen::setNbThreads(threads);
    if (quiet) spdlog::set_level(spdlog::level::warn);
    Context ctx;
    ctx.cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (seed_opt->count() > 0) set_seed(ctx.cfg, seed);
    ctx.out_dir = out_dir;
    ctx.threads = threads;
    ctx.quiet = quiet;
    std::filesystem::create_directories(out_dir);
    if (*solve) return cmd_solve(ctx);
    if (*limit) return cmd_limit(ctx);
    if (*spectrum) return cmd_spectrum(ctx);
    if (*decompose) return cmd_decompose(ctx);
    if (*helmholtz) return cmd_helmholtz(ctx);
    if (*verify) return cmd_verify(ctx, suite);
  } catch (const std::exception& e) {
    return report_error(e);
  }
  return kExitOk;
}
