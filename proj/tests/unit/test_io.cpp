// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "limabs/errors.hpp"
#include "limabs/io/commands.hpp"

using namespace limabs;
using namespace limabs::io;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text, "run.toml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsParse) {
  const RunConfig c = parse_config_text("", "empty.toml");
  EXPECT_EQ(c.grid.n, 16);
  EXPECT_EQ(c.omega, cplx(1.0, 0.25));
  EXPECT_EQ(c.hash.size(), 64u);
  EXPECT_EQ(c.hash, default_config().hash);
}

TEST(Config, ValuesRoundTrip) {
  const RunConfig c = parse_config_text(R"(
seed = 9
[grid]
h = 0.25
n = 24
r0 = 1.1
[grid.obstacle]
kind = "box"
lo = [-0.5, -0.5, -0.5]
hi = [0.5, 0.5, 0.5]
[bc]
rule = "hemisphere"
[frequency]
omega = [1.5, 0.1]
[schedule]
sigma0 = 0.4
ratio = 0.25
n = 5
side = -1
[material.mu]
kind = "radial"
amplitude = 0.3
kappa = 2.0
projector = "radial"
)");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.grid.n, 24);
  EXPECT_EQ(c.grid.obstacle.kind, ObstacleSpec::Kind::Box);
  EXPECT_EQ(c.bc_name, "hemisphere");
  EXPECT_EQ(c.omega, cplx(1.5, 0.1));
  EXPECT_TRUE(c.schedule.present);
  EXPECT_EQ(c.schedule.ratio, 0.25);
  EXPECT_EQ(c.schedule.side, -1);
  EXPECT_EQ(c.material.mu.kind, GammaSpec::Kind::Radial);
  EXPECT_TRUE(c.material.mu.radial_projector);
}

TEST(Config, RatioOutsideUnitIntervalNamesKeyAndLine) {
  const std::string e = error_of("[frequency]\nomega = 1.0\n\n[schedule]\nratio = 1.5\n");
  EXPECT_NE(e.find("run.toml:5:"), std::string::npos) << e;
  EXPECT_NE(e.find("schedule.ratio must be in (0,1)"), std::string::npos) << e;
}

TEST(Config, UnknownKeyRejected) {
  const std::string e = error_of("[grid]\nh = 0.5\nsize = 3\n");
  EXPECT_NE(e.find("run.toml:3:"), std::string::npos) << e;
  EXPECT_NE(e.find("grid.size"), std::string::npos) << e;
}

TEST(Config, WrongTypeAndBadChoice) {
  EXPECT_NE(error_of("[grid]\nn = \"sixteen\"\n").find("grid.n"), std::string::npos);
  EXPECT_NE(error_of("[bc]\nrule = \"gamma3\"\n").find("bc.rule"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nh = -1.0\n").find("grid.h"), std::string::npos);
}

TEST(Config, SyntaxErrorHasLocation) {
  const std::string e = error_of("[grid\nh = 1\n");
  EXPECT_NE(e.find("run.toml:1:"), std::string::npos) << e;
}

TEST(Config, HashIgnoresFormattingButNotValuesOrSeed) {
  const RunConfig a = parse_config_text("[grid]\nh = 0.5\nn = 16\n");
  const RunConfig b = parse_config_text("# comment\n[grid]\nn   = 16\nh = 0.50\n");
  const RunConfig c = parse_config_text("[grid]\nh = 0.5\nn = 18\n");
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_NE(a.hash, c.hash);
  RunConfig d = a;
  set_seed(d, 2);
  EXPECT_NE(a.hash, d.hash);
  EXPECT_EQ(d.seed, 2u);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Csv, QuotingAndHashColumn) {
  CsvTable t;
  t.header = {"a", "b"};
  t.add({"x,y", "say \"hi\""});
  t.add({num(0.1), num(std::numeric_limits<double>::quiet_NaN())});
  const std::string s = format_csv(t, "h");
  EXPECT_EQ(s, "a,b,config_sha256\r\n\"x,y\",\"say \"\"hi\"\"\",h\r\n0.1,nan,h\r\n");
  t.add({"only one"});
  EXPECT_THROW(format_csv(t, "h"), std::logic_error);
}

TEST(Csv, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(num(v)), v);
  EXPECT_EQ(num(3), "3");
  EXPECT_EQ(num(true), "true");
}

TEST(Json, HashIsFirstKey) {
  Json j;
  j["z"] = 1;
  const std::string s = format_json(j, "abc");
  EXPECT_EQ(s.rfind("{\n  \"config_sha256\": \"abc\",", 0), 0u) << s;
  EXPECT_EQ(s.back(), '\n');
}

TEST(Verify, DeterministicAndUnknownSuite) {
  RunConfig cfg = default_config();
  const auto a = run_suite("operators", cfg);
  const auto b = run_suite("operators", cfg);
  EXPECT_EQ(format_json(verify_json("operators", a, cfg.seed), cfg.hash),
            format_json(verify_json("operators", b, cfg.seed), cfg.hash));
  for (const auto& c : a) EXPECT_TRUE(c.pass) << c.name << " " << c.measured;
  EXPECT_THROW(run_suite("everything", cfg), ConfigError);
}

TEST(Errors, ExitCodes) {
  EXPECT_EQ(report_error(ConfigError("f", "bad")), kExitConfig);
  EXPECT_EQ(report_error(Error(ErrorCode::BadParameters, "x")), kExitConfig);
  EXPECT_EQ(report_error(Error(ErrorCode::SolverStagnation, "x")), kExitSolver);
}
