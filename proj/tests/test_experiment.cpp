#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "treewave/experiment.hpp"

using namespace treewave;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("treewave_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

ExperimentConfig base(const std::string& name) {
  ExperimentConfig c;
  c.out = scratch(name);
  return c;
}

}  // namespace

TEST(Experiment, Delta0BothSolversAgree) {
  auto c = base("both");
  auto r = run_experiment(c);
  EXPECT_EQ(r.snapshot_count, 17);
  EXPECT_EQ(r.agreement, "exact");
  auto m = Json::parse(slurp(r.manifest));
  EXPECT_EQ(m["snapshot_count"], 17);
  EXPECT_EQ(m["closed_recurrence_agreement"], "exact");
  EXPECT_EQ(m["snapshots"].size(), 17u);
  EXPECT_EQ(m["config"]["radius"], 10);
  for (int n = -8; n <= 8; ++n) EXPECT_TRUE(fs::exists(c.out / detail::snapshot_name(n))) << n;
  EXPECT_EQ(detail::snapshot_name(-3), "snapshots/u_-003.csv");
}

TEST(Experiment, SnapshotValuesAtStepTwo) {
  auto c = base("step2");
  run_experiment(c);
  auto rows = csv(c.out / "snapshots/u_+002.csv");
  ASSERT_EQ(rows.size(), 1u + 1 + 6);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"", "-1/4", "0", "-0.25"}));
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), "0.25");
}

TEST(Experiment, EnergyIsConstantFiveSixteenths) {
  auto c = base("energy");
  c.outputs = {Output::energy};
  run_experiment(c);
  auto rows = csv(c.out / "energy.csv");
  ASSERT_EQ(rows.size(), 1u + 15);
  EXPECT_EQ(rows[0][5], "E_a");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][5], "5/16");
    EXPECT_EQ(rows[i][6], "0");
  }
  EXPECT_FALSE(fs::exists(c.out / "snapshots"));
}

TEST(Experiment, EquipartitionWithinBound) {
  auto c = base("equip");
  c.outputs = {Output::equipartition};
  c.initial = "random";
  c.q = 3;
  c.steps = 5;
  run_experiment(c);
  auto rows = csv(c.out / "equipartition.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][1], rows[i][3]);
    EXPECT_EQ(rows[i][2], rows[i][4]);
    EXPECT_EQ(rows[i].back(), "true");
  }
}

TEST(Experiment, TooSmallRadiusNamesTheSnapshot) {
  auto c = base("trunc");
  c.radius = 9;
  try {
    run_experiment(c);
    FAIL() << "no truncation error";
  } catch (const TruncationError& e) {
    EXPECT_NE(std::string(e.what()).find("n=-8"), std::string::npos) << e.what();
  }
}

TEST(Experiment, InvalidConfigNamesTheField) {
  auto expect_field = [](ExperimentConfig c, const std::string& field) {
    try {
      run_experiment(c);
      FAIL() << field;
    } catch (const UsageError& e) {
      EXPECT_EQ(std::string(e.what()).rfind(field + ":", 0), 0u) << e.what();
    }
  };
  auto c = base("bad");
  c.q = 1;
  expect_field(c, "q");
  c = base("bad");
  c.steps = 0;
  expect_field(c, "steps");
  c = base("bad");
  c.solver = "fast";
  expect_field(c, "solver");
  c = base("bad");
  c.schedule = "-1";
  expect_field(c, "schedule");
  c = base("bad");
  c.initial = "{\"h\": 1}";
  expect_field(c, "initial");
}

TEST(Experiment, InlineJsonInitialData) {
  auto c = base("inline");
  c.initial = R"({"f":{"q":2,"entries":[{"vertex":"0,1","value":{"a":"1/2","b":"0"}}]}})";
  c.steps = 3;
  c.outputs = {Output::snapshots, Output::energy};
  auto r = run_experiment(c);
  EXPECT_EQ(r.agreement, "exact");
  auto m = Json::parse(slurp(r.manifest));
  EXPECT_EQ(m["initial_data_radius"], 2);
  auto rows = csv(c.out / "snapshots/u_+000.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "\"0");

  auto wrong = base("inline_q");
  wrong.q = 3;
  wrong.initial = c.initial;
  EXPECT_THROW(run_experiment(wrong), Error);
}

TEST(Experiment, FloatModeReportsDifference) {
  auto c = base("float");
  c.mode = ScalarMode::float64;
  c.initial = "random";
  c.steps = 6;
  auto r = run_experiment(c);
  ASSERT_EQ(r.agreement.rfind("max_abs_diff=", 0), 0u);
  EXPECT_LE(std::stod(r.agreement.substr(13)), 1e-9);
  auto rows = csv(c.out / "snapshots/u_+000.csv");
  EXPECT_EQ(rows[1][1], "");
}

TEST(Experiment, SingleSolver) {
  auto c = base("closed_only");
  c.solver = "closed";
  c.steps = 3;
  EXPECT_EQ(run_experiment(c).agreement, "not-run");
}

TEST(Experiment, CsvOutputsAreByteStable) {
  auto a = base("stable_a");
  auto b = base("stable_b");
  a.initial = b.initial = "random";
  a.seed = b.seed = 9;
  a.steps = b.steps = 5;
  run_experiment(a);
  run_experiment(b);
  auto ma = Json::parse(slurp(a.out / "manifest.json"));
  auto mb = Json::parse(slurp(b.out / "manifest.json"));
  EXPECT_EQ(ma["sha256"], mb["sha256"]);
  for (const auto& [name, sum] : ma["sha256"].items()) {
    EXPECT_EQ(slurp(a.out / name), slurp(b.out / name)) << name;
    EXPECT_EQ(sha256_hex(slurp(a.out / name)), sum.get<std::string>()) << name;
  }
}

TEST(Experiment, TransformsDriver) {
  auto c = base("transforms");
  c.initial = "delta1";
  auto r = run_transforms(c);
  EXPECT_EQ(r.agreement, "exact");
  auto m = Json::parse(slurp(r.manifest));
  EXPECT_EQ(m["inverse_round_trip"], true);
  auto rows = csv(c.out / "abel.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"-1", "0", "1", "1.4142135623730951"}));
  EXPECT_EQ(csv(c.out / "spherical_transform.csv").size(), 101u);
}

TEST(Experiment, Sha256KnownValue) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
