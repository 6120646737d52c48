#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsac/cli.hpp"

using namespace nsac;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nsac_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  std::string l;
  while (std::getline(is, l)) out.push_back(l);
  return out;
}

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

}  // namespace

TEST(Config, ParsesKeysAndComments) {
  const RunConfig c = parse("# comment\n n = 6\ngamma=1.8 # trailing\n\npreset = shear\nn_list = 2, 4,8\nT = 0.25\n");
  EXPECT_EQ(c.n, 6);
  EXPECT_DOUBLE_EQ(c.params.gamma, 1.8);
  EXPECT_EQ(c.preset, "shear");
  EXPECT_EQ(c.n_list, (std::vector<int>{2, 4, 8}));
  EXPECT_DOUBLE_EQ(c.params.final_time, 0.25);
}

TEST(Config, ErrorsCarryLineAndField) {
  try {
    parse("n = 4\n\nbogus = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line, 3);
    EXPECT_EQ(e.field, "bogus");
  }
  try {
    parse("nu = fast\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line, 1);
    EXPECT_EQ(e.field, "nu");
  }
  EXPECT_THROW(parse("n 4\n"), ConfigError);
  EXPECT_THROW(parse("n = 4.5\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST(Config, ValidationUsesAdmissibility) {
  RunConfig c = parse("gamma = 1.5\nepsilon = 2\n");
  EXPECT_THROW(validate_config(c), ConfigError);
  std::ostringstream log;
  c.out_dir = scratch("inadmissible").string();
  EXPECT_EQ(cmd_run(c, log), kExitConfig);
  EXPECT_FALSE(fs::exists(fs::path(c.out_dir) / "energy.csv"));
  EXPECT_NE(log.str().find("epsilon"), std::string::npos);
  EXPECT_THROW(validate_config(parse("lambda = 0\n")), ConfigError);
  EXPECT_THROW(validate_config(parse("preset = nope\n")), ConfigError);
}

TEST(Run, ConstantPresetWritesQuietLedger) {
  RunConfig c = parse("n = 4\npreset = constant\nT = 0.1\n");
  c.out_dir = scratch("constant").string();
  std::ostringstream log;
  ASSERT_EQ(cmd_run(c, log), kExitOk) << log.str();
  const auto rows = lines(fs::path(c.out_dir) / "energy.csv");
  ASSERT_GE(rows.size(), 2u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream rec(rows[i]);
    std::string cell;
    std::vector<double> v;
    while (std::getline(rec, cell, ',')) v.push_back(std::stod(cell));
    for (int d = 10; d < 17; ++d) EXPECT_NEAR(v[static_cast<std::size_t>(d)], 0.0, 1e-13);
  }
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "snapshot_final.txt"));
}

TEST(Run, ResumeFromSnapshotRepeatsRows) {
  const fs::path dir = scratch("restart");
  RunConfig c = parse("n = 4\npreset = shear\nsteps = 4\nsnapshot_every = 2\n");
  c.out_dir = (dir / "full").string();
  std::ostringstream log;
  ASSERT_EQ(cmd_run(c, log), kExitOk) << log.str();
  const auto full = lines(dir / "full" / "energy.csv");

  RunConfig r = parse("n = 4\nsteps = 2\n");
  r.initial_snapshot = (dir / "full" / "snapshot_000002.txt").string();
  r.out_dir = (dir / "resumed").string();
  ASSERT_EQ(cmd_run(r, log), kExitOk) << log.str();
  const auto resumed = lines(dir / "resumed" / "energy.csv");
  ASSERT_EQ(full.size(), 5u);
  ASSERT_EQ(resumed.size(), 3u);
  EXPECT_EQ(resumed[1], full[3]);
  EXPECT_EQ(resumed[2], full[4]);

  RunConfig wrong = r;
  wrong.n = 8;
  EXPECT_EQ(cmd_run(wrong, log), kExitConfig);
}

TEST(Check, DefaultSeedAndSweep) {
  RunConfig c;
  c.check_samples = 5;
  std::ostringstream log;
  EXPECT_EQ(cmd_check(c, log), kExitOk) << log.str();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    c.seed = seed;
    EXPECT_EQ(cmd_check(c, log), kExitOk) << "seed " << seed;
  }
}

TEST(Check, ZeroToleranceFails) {
  RunConfig c;
  c.check_samples = 2;
  c.check_tol_scale = 0.0;
  std::ostringstream log;
  EXPECT_EQ(cmd_check(c, log), kExitIdentity);
  EXPECT_NE(log.str().find("FAIL"), std::string::npos);
}

TEST(Study, SmokeAndBadList) {
  RunConfig c = parse("preset = smooth\nn_list = 4,8\n");
  c.out_dir = scratch("study").string();
  std::ostringstream log;
  const auto t0 = std::chrono::steady_clock::now();
  ASSERT_EQ(cmd_study(c, log), kExitOk) << log.str();
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0);
  EXPECT_EQ(lines(fs::path(c.out_dir) / "study.csv").size(), 3u);

  RunConfig dup = parse("n_list = 4,4\n");
  dup.out_dir = c.out_dir;
  EXPECT_EQ(cmd_study(dup, log), kExitConfig);
}
