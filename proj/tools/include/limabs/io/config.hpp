// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "limabs/decomposition.hpp"
#include "limabs/grid.hpp"
#include "limabs/limit.hpp"
#include "limabs/materials.hpp"
#include "limabs/oracles.hpp"
#include "limabs/resolvent.hpp"

namespace limabs::io {

// Bad configuration text; where() is "file:line:column" or just the file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what) {}
};

struct GridConfig {
  double h = 0.5;
  int n = 16;
  double r0 = 1.5;
  ObstacleSpec obstacle = ObstacleSpec::sphere(1.0);
};

struct ScheduleConfig {
  bool present = false;
  double sigma0 = 0.5;
  double ratio = 0.5;
  int n = 8;
  int side = 1;
  bool richardson = false;
};

struct SourceConfig {
  enum class Kind { PlaneWave, Dipole, Bump };
  Kind kind = Kind::PlaneWave;
  PlaneWaveSpec plane_wave;
  DipoleSpec dipole;
  // cutoff of the lift for plane_wave and dipole
  double r_in = 1.5, r_out = 2.1;
  // bump: smooth E-source of this radius
  Vec3 center = Vec3(1.8, 0.0, 0.0);
  double radius = 0.6;
  CVec3 polarization = CVec3(0.0, 1.0, 0.0);
};

struct OutputConfig {
  bool vtk = true, csv = true, json = true;
  std::string prefix;
};

struct SpectrumConfig {
  double omega0 = 0.6;
  int k = 5;
  double localization_limit = 0.2;
};

struct HelmholtzConfig {
  double nu = 1.0;
  std::vector<double> taus{1.0, 0.5, 0.25, 0.125};
  double s = 0.75, t = -1.0;
  double source_radius = 1.5;
  bool decay_study = false;
};

struct VerifyConfig {
  int samples = 5;
};

struct RunConfig {
  std::string path;
  GridConfig grid;
  MaterialSpec material;
  BcRule bc = BcRule::all_gamma1();
  std::string bc_name = "gamma1";
  cplx omega{1.0, 0.25};
  ScheduleConfig schedule;
  SourceConfig source;
  SolverOptions solver;
  double truncation_tol = 1e-6;
  double truncation_budget = std::numeric_limits<double>::infinity();
  double monitor_t = -1.0;
  OutputConfig outputs;
  SpectrumConfig spectrum;
  HelmholtzConfig helmholtz;
  Flavor flavor = Flavor::Epsilon;
  VerifyConfig verify;
  std::uint64_t seed = 1;
  // toml text in canonical form; the hash covers it and the effective seed
  std::string canonical;
  std::string hash;
};

// Throws ConfigError naming the key and its location.
RunConfig parse_config_text(const std::string& text, const std::string& source_name = "<config>");
RunConfig load_config(const std::string& path);
// Defaults only, as if the file were empty.
RunConfig default_config();

// Recomputes cfg.hash after a seed override.
void set_seed(RunConfig& cfg, std::uint64_t seed);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

}  // namespace limabs::io
