// Copyright 2026 The cdmp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end tests of the command-line tool, run as a subprocess.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "cdmp/io.hpp"
#include "support/oracles.hpp"

namespace cdmp {
namespace {

namespace fs = std::filesystem;
using testing::kPi;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("cdmp_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result Run(const std::string& args, const std::string& env = "") const {
    const fs::path out = dir_ / ".stdout", err = dir_ / ".stderr";
    const std::string cmd = "cd '" + dir_.string() + "' && env -u CDMP_OUTPUT_DIR " + env +
                            " '" CDMP_CLI_PATH "' " + args + " >'" + out.string() +
                            "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  fs::path Path(const std::string& name) const { return dir_ / name; }

  static double Number(const std::string& text, const std::string& key) {
    const std::regex re(key + R"( *[=:] *([-+0-9.eE]+|inf|nan))");
    std::smatch m;
    if (!std::regex_search(text, m, re)) {
      ADD_FAILURE() << "no '" << key << "' in:\n" << text;
      return std::nan("");
    }
    return std::stod(m[1]);
  }

  static std::string Value(const std::string& text, const std::string& key) {
    const std::regex re("(^|\\n)" + key + R"( = ([^\n]*))");
    std::smatch m;
    if (!std::regex_search(text, m, re)) {
      ADD_FAILURE() << "no '" << key << "' in:\n" << text;
      return {};
    }
    return m[2];
  }

  fs::path dir_;
};

TEST_F(Cli, DemoGenSamplesDurationTimesRate) {
  const Result r = Run("demo-gen --kind reach --duration 4");
  ASSERT_EQ(r.code, 0) << r.err;
  const Demonstration d = load_demo(Path("demo_reach.csv").string());
  EXPECT_EQ(d.size(), 1000u);
  EXPECT_DOUBLE_EQ(d.t()[1] - d.t()[0], 1.0 / 250.0);
}

TEST_F(Cli, DemoGenHandoverTurnsOneAndAHalfPi) {
  const Result r = Run("demo-gen --kind handover_gt_pi --angle 4.712 --out h.csv");
  ASSERT_EQ(r.code, 0) << r.err;
  const Demonstration d = load_demo(Path("h.csv").string());
  EXPECT_NEAR(quat_diff(d.q().front(), d.q().back()).norm(), 1.5 * kPi, 1e-3);
  EXPECT_NEAR(quat_diff(d.q().front(), d.q().back()).norm(), 4.712, 1e-9);
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(Run("demo-gen --duration 4").code, 2);
  EXPECT_EQ(Run("demo-gen --kind circle").code, 2);
  EXPECT_EQ(Run("demo-gen --kind handover_gt_pi --angle 2").code, 2);
  EXPECT_EQ(Run("demo-gen --kind reach --duration -1").code, 2);
  EXPECT_EQ(Run("").code, 2);
  EXPECT_EQ(Run("fly").code, 2);
  EXPECT_EQ(Run("run --preset setup9").code, 2);
  EXPECT_EQ(Run("run --preset custom").code, 2);
  EXPECT_EQ(Run("run --config missing.cfg").code, 2);
  EXPECT_EQ(Run("run --model missing.txt").code, 2);
  EXPECT_EQ(Run("--help").code, 0);
}

TEST_F(Cli, TrainReachesRolloutFidelity) {
  ASSERT_EQ(Run("demo-gen --kind reach --out d.csv").code, 0);
  const Result r = Run("train --demo d.csv --basis 25 --out m.txt");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(Number(r.out, "rollout rms position error"), 1e-2);
  EXPECT_LT(Number(r.out, "rollout rms orientation error"), 0.05);
  const DmpModel m = load_model(Path("m.txt").string());
  EXPECT_EQ(m.n_basis(), 25);
}

TEST_F(Cli, TrainedModelRoundTripsFieldExact) {
  ASSERT_EQ(Run("demo-gen --kind handover_gt_pi --out d.csv").code, 0);
  ASSERT_EQ(Run("train --demo d.csv --out m.txt").code, 0);
  const DmpModel m = load_model(Path("m.txt").string());
  save_model(Path("again.txt").string(), m);
  EXPECT_TRUE(load_model(Path("again.txt").string()) == m);
  EXPECT_EQ(Slurp(Path("again.txt")), Slurp(Path("m.txt")));
}

TEST_F(Cli, ConstantDemoIsDegenerate) {
  {
    std::ofstream out(Path("still.csv"));
    out << "t,y1,y2,y3,qw,qx,qy,qz\n";
    for (int k = 0; k < 50; ++k) out << k * 0.004 << ",0.1,0.2,0.3,1,0,0,0\n";
  }
  const Result r = Run("train --demo still.csv --out m.txt");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("warning"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("1,2,3,4,5,6"), std::string::npos) << r.err;
  const DmpModel m = load_model(Path("m.txt").string());
  EXPECT_TRUE(m.weights().isZero(0.0));
}

TEST_F(Cli, MoreBasesNeverIncreaseTheResidual) {
  ASSERT_EQ(Run("demo-gen --kind reach --out d.csv").code, 0);
  double prev = std::numeric_limits<double>::infinity();
  for (int nb : {1, 10, 25, 50}) {
    const Result r = Run("train --demo d.csv --basis " + std::to_string(nb) +
                         " --out m" + std::to_string(nb) + ".txt");
    ASSERT_EQ(r.code, 0) << r.err;
    const double res = Number(r.out, "forcing residual rms total");
    EXPECT_LE(res, prev * (1 + 1e-12)) << nb;
    prev = res;
  }
}

TEST_F(Cli, TrainRejectsMissingOrBrokenDemos) {
  EXPECT_EQ(Run("train --demo nope.csv").code, 2);
  {
    std::ofstream out(Path("bad.csv"));
    out << "t,y\n0,1\n";
  }
  EXPECT_EQ(Run("train --demo bad.csv").code, 2);
  EXPECT_EQ(Run("train").code, 2);
}

TEST_F(Cli, Setup1AllTrialsConverge) {
  const Result r = Run("run --preset setup1 --trials 100 --jobs 4 --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = Slurp(Path("setup1_summary.txt"));
  EXPECT_EQ(Value(summary, "converged"), "100/100");
  EXPECT_EQ(Value(summary, "aborted"), "0");
  EXPECT_LT(Number(summary, "worst_decay_slope"), -1.0);
  EXPECT_GT(Number(summary, "min_decay_r2"), 0.95);
  EXPECT_TRUE(fs::exists(Path("setup1_trial_0.csv")));
  EXPECT_TRUE(fs::exists(Path("setup1_trial_99.csv")));
}

TEST_F(Cli, Setup3FlagsTheEquatorCrossing) {
  const Result r = Run("run --preset setup3 --trials 2 --jobs 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = Slurp(Path("setup3_summary.txt"));
  EXPECT_EQ(Value(summary, "equator_crossed"), "true");
  EXPECT_EQ(Value(summary, "initial_dcg_gt_pi"), "true");
  EXPECT_EQ(Value(summary, "converged"), "2/2");
}

TEST_F(Cli, UnperturbedSetup2StaysNearNominalTime) {
  const Result r = Run("run --preset setup2 --no-perturb --trials 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(Number(Slurp(Path("setup2_summary.txt")), "max_tau_ratio"), 1.05);
}

TEST_F(Cli, RunsAreByteIdentical) {
  ASSERT_EQ(Run("run --preset setup2 --trials 3 --jobs 3 --horizon 8 --out-dir a").code, 0);
  ASSERT_EQ(Run("run --preset setup2 --trials 3 --jobs 1 --horizon 8 --out-dir b").code, 0);
  for (const char* f : {"setup2_trial_0.csv", "setup2_trial_2.csv", "setup2_summary.txt"}) {
    const std::string a = Slurp(Path("a") / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, Slurp(Path("b") / f)) << f;
  }
  ASSERT_EQ(Run("run --preset setup2 --trials 1 --horizon 8 --seed 7 --out-dir c").code, 0);
  EXPECT_NE(Slurp(Path("a") / "setup2_trial_0.csv"), Slurp(Path("c") / "setup2_trial_0.csv"));
}

TEST_F(Cli, OutputDirectoryPrecedence) {
  {
    std::ofstream cfg(Path("run.cfg"));
    cfg << "preset = setup1\ntrials = 1\noutput_dir = from_config\n";
  }
  ASSERT_EQ(Run("run --config run.cfg").code, 0);
  EXPECT_TRUE(fs::exists(Path("from_config") / "setup1_summary.txt"));
  ASSERT_EQ(Run("run --config run.cfg", "CDMP_OUTPUT_DIR=from_env").code, 0);
  EXPECT_TRUE(fs::exists(Path("from_env") / "setup1_summary.txt"));
  ASSERT_EQ(Run("run --config run.cfg --out-dir from_flag", "CDMP_OUTPUT_DIR=from_env").code,
            0);
  EXPECT_TRUE(fs::exists(Path("from_flag") / "setup1_summary.txt"));
  ASSERT_EQ(Run("demo-gen --kind reach", "CDMP_OUTPUT_DIR=demos").code, 0);
  EXPECT_TRUE(fs::exists(Path("demos") / "demo_reach.csv"));
}

TEST_F(Cli, AbortingScheduleExitsWithFourAndKeepsTheLog) {
  ASSERT_EQ(Run("demo-gen --kind reach --out d.csv").code, 0);
  ASSERT_EQ(Run("train --demo d.csv --out m.txt").code, 0);
  {
    std::ofstream cfg(Path("spin.cfg"));
    cfg << "preset = custom\nmodel = m.txt\nhorizon = 2\n"
        << "displace = 0.5 0 0 0 0 0 " << format_double(2 * kPi) << "\n";
  }
  const Result r = Run("run --config spin.cfg");
  EXPECT_EQ(r.code, 4) << r.err;
  const std::string summary = Slurp(Path("custom_summary.txt"));
  EXPECT_EQ(Value(summary, "aborted"), "1");
  EXPECT_NE(summary.find("step 125"), std::string::npos) << summary;
  std::ifstream log(Path("custom_trial_0.csv"));
  const auto rows = read_episode_csv(log);
  EXPECT_EQ(rows.size(), 125u);
}

TEST_F(Cli, CustomScheduleWithPulses) {
  ASSERT_EQ(Run("demo-gen --kind reach --out d.csv").code, 0);
  ASSERT_EQ(Run("train --demo d.csv --out m.txt").code, 0);
  {
    std::ofstream cfg(Path("c.cfg"));
    cfg << "# two pulses\npreset = custom\nmodel = m.txt\nhorizon = 30\n"
        << "pulse = 0.5 0.8 5 0 0 0 0 5\npulse = 2.0 2.3 0 -5 0 5 0 0\n";
  }
  const Result r = Run("run --config c.cfg");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = Slurp(Path("custom_summary.txt"));
  EXPECT_GT(Number(summary, "max_tau_ratio"), 1.5);
  EXPECT_EQ(Value(summary, "converged"), "1/1");
  std::ofstream bad(Path("bad.cfg"));
  bad << "preset = custom\nmodel = m.txt\npulse = 1 2 3\n";
  bad.close();
  EXPECT_EQ(Run("run --config bad.cfg").code, 2);
}

TEST_F(Cli, ReportSingleConvergedLog) {
  ASSERT_EQ(Run("run --preset setup1 --trials 1 --out-dir logs").code, 0);
  const Result r = Run("report logs/setup1_trial_0.csv --out-dir rep");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string table = Slurp(Path("rep") / "report_trials.csv");
  EXPECT_EQ(table.rfind("file,converged,", 0), 0u);
  EXPECT_NE(table.find("setup1_trial_0.csv,true,"), std::string::npos) << table;
  EXPECT_EQ(Number(r.out, "trials"), 1);
  EXPECT_EQ(Number(r.out, "converged"), 1);
  const std::string longf = Slurp(Path("rep") / "report_long.csv");
  EXPECT_EQ(longf.rfind("file,t,state,value\n", 0), 0u);
  EXPECT_NE(longf.find(",n_dcg,"), std::string::npos);
}

TEST_F(Cli, ReportTenLogs) {
  ASSERT_EQ(Run("run --preset setup2 --trials 10 --jobs 4 --out-dir logs").code, 0);
  const Result r = Run("report logs --out-dir rep");
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(Path("rep") / "report_trials.csv");
  std::string line;
  int rows = 0, aggregates = 0;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.rfind("# aggregate:", 0) == 0) {
      ++aggregates;
      EXPECT_NE(line.find("trials=10"), std::string::npos);
      EXPECT_NE(line.find("mean_max_tau_a="), std::string::npos);
    } else if (!line.empty()) {
      ++rows;
    }
  }
  EXPECT_EQ(rows, 10);
  EXPECT_EQ(aggregates, 1);
}

TEST_F(Cli, ReportCountsMixedOutcomes) {
  ASSERT_EQ(Run("run --preset setup1 --trials 3 --out-dir logs").code, 0);
  // Truncated horizon: these cannot have settled yet.
  ASSERT_EQ(Run("run --preset setup2 --trials 2 --horizon 1 --out-dir logs").code, 0);
  const Result r = Run("report logs --out-dir rep");
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(Path("rep") / "report_trials.csv");
  std::string line;
  int yes = 0, no = 0;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.find(",true,") != std::string::npos) ++yes;
    if (line.find(",false,") != std::string::npos) ++no;
  }
  EXPECT_EQ(yes, 3);
  EXPECT_EQ(no, 2);
  EXPECT_EQ(Number(r.out, "converged"), yes);
  EXPECT_EQ(Number(r.out, "failed"), no);
  EXPECT_EQ(Number(r.out, "trials"), yes + no);
}

TEST_F(Cli, ReportWithoutInputsIsAUsageError) {
  EXPECT_EQ(Run("report").code, 2);
  fs::create_directories(Path("empty"));
  EXPECT_EQ(Run("report empty").code, 2);
  EXPECT_EQ(Run("report missing.csv").code, 2);
}

}  // namespace
}  // namespace cdmp
