// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "limabs/io/config.hpp"
#include "limabs/io/writers.hpp"

namespace limabs::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct Context {
  RunConfig cfg;
  std::string out_dir = ".";
  int threads = 1;
  bool quiet = false;

  std::string path(const std::string& name) const;
};

struct Model {
  std::shared_ptr<DofMap> dofs;
  std::shared_ptr<BlockOperators> ops;
  std::shared_ptr<MaxwellOperator> op;
};

Model build_model(const RunConfig& cfg);

struct Source {
  FieldPair f;
  FieldPair lift;         // zero for the bump source
  double support = 0.0;   // radius containing supp f
};

Source build_source(const Model& m, const RunConfig& cfg, cplx omega);

// Each returns the exit code; library errors propagate as exceptions.
int cmd_solve(const Context& ctx);
int cmd_limit(const Context& ctx);
int cmd_spectrum(const Context& ctx);
int cmd_decompose(const Context& ctx);
int cmd_helmholtz(const Context& ctx);
int cmd_verify(const Context& ctx, const std::string& suite);

struct Check {
  std::string suite, name;
  double measured = 0.0, threshold = 0.0;
  std::string relation;  // "<=", ">=", "=="
  bool pass = false;
};

const std::vector<std::string>& verify_suites();
// Throws ConfigError for an unknown suite name.
std::vector<Check> run_suite(const std::string& suite, const RunConfig& cfg);

// The verify report as written to verify.json and verify.csv.
Json verify_json(const std::string& suite, const std::vector<Check>& checks, std::uint64_t seed);
CsvTable verify_csv(const std::vector<Check>& checks);

// Maps an exception from a command to an exit code and prints it to stderr.
int report_error(const std::exception& e);

}  // namespace limabs::io
