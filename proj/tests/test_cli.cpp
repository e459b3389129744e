// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qst/cli/commands.hpp"

namespace qst::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage = {"qst"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json invoke_json(std::initializer_list<std::string> args) {
  const auto r = invoke(args);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  return json::parse(r.out);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qst_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

fs::path write_table_spectrum(const fs::path& dir) {
  // Top three values as published; the rest spread evenly around the
  // remaining trace so the file sums to one.
  fs::create_directories(dir);
  const std::vector<double> top = {0.61024, 0.21595, 0.14949};
  const double rest = 1.0 - (top[0] + top[1] + top[2]);
  const fs::path file = dir / "eigenvalues.txt";
  std::ofstream out(file);
  out << "# descending top values first\n";
  out.precision(17);
  for (double v : top) out << v << "\n";
  for (int i = 0; i < 61; ++i) out << rest / 61 + 0.01 * (i - 30) / 30.0 << "\n";
  return file;
}

TEST(Predict, Examples) {
  EXPECT_NEAR(invoke_json({"predict", "--qubits", "6", "--counts", "100"})["radius"].get<double>(), 0.115741, 1e-6);
  EXPECT_NEAR(invoke_json({"predict", "--qubits", "6", "--counts", "230", "--rank", "3"})["radius"].get<double>(),
              0.074507, 1e-6);
  EXPECT_DOUBLE_EQ(invoke_json({"predict", "--qubits", "1", "--counts", "100"})["center"].get<double>(), 0.5);
}

TEST(Predict, ReportsThresholdWhenQGiven) {
  const auto j = invoke_json({"predict", "-n", "6", "-N", "100", "--q", "0.8"});
  EXPECT_EQ(j["r"], 1);
  EXPECT_EQ(j["N0_if_q_given"], 132921);
  EXPECT_NEAR(j["width"].get<double>(), 2 * j["radius"].get<double>(), 1e-15);
  EXPECT_GE(j["physicality_probability"].get<double>(), 0.0);
  EXPECT_LE(j["physicality_probability"].get<double>(), 1.0);
}

TEST(Predict, TableFormat) {
  const auto r = invoke({"--format", "table", "predict", "--qubits", "6", "--counts", "100"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("0.115741"), std::string::npos) << r.out;
}

TEST(Predict, UsageErrorsNameTheFlag) {
  auto r = invoke({"predict", "--qubits", "0", "--counts", "100"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--qubits"), std::string::npos) << r.err;
  r = invoke({"predict", "--qubits", "6", "--counts", "-3"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--counts"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"predict", "--qubits", "6"}).code, kExitUsage);
  EXPECT_EQ(invoke({"predict", "--qubits", "six", "--counts", "1"}).code, kExitUsage);
}

TEST(MinCounts, Examples) {
  auto r = invoke({"min-counts", "--qubits", "6", "--q", "0.8"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(json::parse(r.out)["min_counts"], 132921);
  r = invoke({"min-counts", "--qubits", "1", "--q", "0.5"});
  EXPECT_EQ(json::parse(r.out)["min_counts"], 12);
  r = invoke({"min-counts", "--qubits", "6", "--q", "1"});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_FALSE(r.err.empty());
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
  EXPECT_EQ(invoke({"--format", "xml", "predict", "-n", "2", "-N", "5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"analyze", "--in", scratch("missing").string()}).code, kExitRuntime);
  const auto v = invoke({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_EQ(v.out.find(std::string(code_version())) != std::string::npos, true) << v.out;
}

TEST(RankTest, TableRowFromPublishedTopValues) {
  const auto file = write_table_spectrum(scratch("table"));
  const auto j = invoke_json({"rank-test", "--eigenvalues", file.string(), "--qubits", "6", "--counts", "230"});
  ASSERT_GE(j["rows"].size(), 4u);
  const auto& row = j["rows"][3];
  EXPECT_EQ(row["rank"], 3);
  EXPECT_NEAR(row["center"].get<double>(), 0.000399, 1e-6);
  EXPECT_NEAR(row["radius"].get<double>(), 0.074507, 1e-6);
  EXPECT_EQ(j["n"], 6);

  const auto t = invoke({"--format", "table", "rank-test", "--eigenvalues", file.string(), "-n", "6", "-N", "230"});
  EXPECT_EQ(t.code, kExitOk);
  EXPECT_NE(t.out.find("0.074507"), std::string::npos) << t.out;
  EXPECT_NE(t.out.find("chosen rank"), std::string::npos) << t.out;
}

TEST(RankTest, Errors) {
  const auto dir = scratch("rank_errors");
  const auto file = write_table_spectrum(dir);
  EXPECT_EQ(invoke({"rank-test", "--eigenvalues", file.string(), "-n", "6"}).code, kExitUsage);
  EXPECT_EQ(invoke({"rank-test", "--eigenvalues", file.string(), "-N", "230"}).code, kExitUsage);
  // A count that is not 2^n is a data error, not a flag error.
  EXPECT_EQ(invoke({"rank-test", "--eigenvalues", file.string(), "-N", "230", "--qubits", "5"}).code, kExitRuntime);
  std::ofstream(dir / "short.txt") << "0.5\n0.25\n0.25\n";
  EXPECT_EQ(invoke({"rank-test", "--eigenvalues", (dir / "short.txt").string(), "-n", "2", "-N", "10"}).code,
            kExitRuntime);
  EXPECT_EQ(invoke({"rank-test", "-N", "230"}).code, kExitUsage);
}

TEST(RankTest, SimulatedGhzReplicaChoosesRankOne) {
  const auto dir = scratch("ghz");
  auto r = invoke({"--seed", "11", "simulate", "-n", "6", "--state", "ghz", "--q", "0.8", "-N", "200000",
                   "--reps", "2", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* replica : {"0", "1"}) {
    const auto j = invoke_json({"rank-test", "--in", dir.string(), "--replica", replica});
    EXPECT_EQ(j["chosen_rank"], 1) << replica;
    EXPECT_EQ(j["N"], 200000.0);
  }
  fs::remove_all(dir);
}

TEST(SimulateAnalyze, MatchesInProcessPipeline) {
  const auto dir = scratch("pipeline");
  const auto r = invoke({"--seed", "42", "--threads", "2", "simulate", "--qubits", "3", "--counts", "100",
                         "--state", "wn", "--reps", "40", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json cli = read_json(dir / "summary.json");

  ExperimentConfig config;
  config.state = StateSpec::white_noise(3);
  config.counts = {CountMode::kMultinomial, 100};
  config.replicas = 40;
  config.master_seed = 42;
  const json direct = ensemble_summary_json(run_ensemble(config));
  EXPECT_EQ(cli, direct);
  EXPECT_EQ(json::parse(r.out), direct);

  const auto a = invoke({"analyze", "--in", dir.string(), "--bins", "20"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const json analysis = read_json(dir / "analysis.json");
  for (const auto& [key, value] : direct.items()) EXPECT_EQ(analysis[key], value) << key;
  EXPECT_EQ(analysis["model"]["kind"], "semicircle");
  EXPECT_DOUBLE_EQ(analysis["model"]["center"].get<double>(), 0.125);
  EXPECT_TRUE(fs::exists(dir / "histogram.csv"));
  EXPECT_TRUE(fs::exists(dir / "overlay.csv"));
  fs::remove_all(dir);
}

TEST(SimulateAnalyze, OverlayKindsFollowTheModel) {
  const auto one = scratch("single");
  ASSERT_EQ(invoke({"simulate", "-n", "1", "-N", "100", "--reps", "50", "--out", one.string()}).code, kExitOk);
  EXPECT_EQ(invoke_json({"analyze", "--in", one.string()})["model"]["kind"], "single_qubit");
  const auto complete = scratch("complete");
  ASSERT_EQ(invoke({"simulate", "-n", "2", "--scheme", "complete", "--total-counts", "4000", "--reps", "20",
                    "--out", complete.string()})
                .code,
            kExitOk);
  const auto j = invoke_json({"analyze", "--in", complete.string()});
  EXPECT_EQ(j["model"]["kind"], "laplace");
  EXPECT_TRUE(j.contains("semicircle_sup_cdf_distance"));
  fs::remove_all(one);
  fs::remove_all(complete);
}

TEST(Simulate, ReproducibleAcrossThreadCounts) {
  const auto a = scratch("threads_a");
  const auto b = scratch("threads_b");
  ASSERT_EQ(invoke({"--threads", "1", "simulate", "-n", "2", "-N", "50", "--reps", "30", "--out", a.string()}).code,
            kExitOk);
  ASSERT_EQ(invoke({"--threads", "3", "simulate", "-n", "2", "-N", "50", "--reps", "30", "--out", b.string()}).code,
            kExitOk);
  std::ifstream fa(a / "spectra.csv"), fb(b / "spectra.csv");
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Simulate, ThreadsFlagOverridesEnvironment) {
  const auto dir = scratch("env");
  ::setenv("QST_THREADS", "0", 1);
  const auto bad = invoke({"simulate", "-n", "1", "-N", "10", "--reps", "3", "--out", dir.string()});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("QST_THREADS"), std::string::npos) << bad.err;
  EXPECT_EQ(invoke({"--threads", "2", "simulate", "-n", "1", "-N", "10", "--reps", "3", "--out", dir.string()}).code,
            kExitOk);
  ::setenv("QST_THREADS", "3", 1);
  EXPECT_EQ(invoke({"simulate", "-n", "1", "-N", "10", "--reps", "3", "--out", dir.string()}).code, kExitOk);
  ::unsetenv("QST_THREADS");
  fs::remove_all(dir);
}

TEST(Simulate, InvalidConfigIsUsageError) {
  const auto dir = scratch("invalid");
  EXPECT_EQ(invoke({"simulate", "-n", "9", "-N", "10", "--reps", "3", "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"simulate", "-n", "2", "--reps", "3", "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"simulate", "-n", "2", "-N", "10", "--state", "ghz", "--q", "1.5", "--reps", "3", "--out",
                    dir.string()})
                .code,
            kExitUsage);
}

TEST(ReadEigenvalueFile, SkipsCommentsAndBlanks) {
  const auto dir = scratch("read");
  fs::create_directories(dir);
  std::ofstream(dir / "v.txt") << "# header\n0.75\n\n0.25  # tail\n";
  EXPECT_EQ(read_eigenvalue_file(dir / "v.txt"), (std::vector<double>{0.75, 0.25}));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace qst::cli
