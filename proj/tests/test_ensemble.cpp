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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qst/ensemble.hpp"

namespace qst {
namespace {

namespace fs = std::filesystem;

ExperimentConfig small_config(std::size_t replicas = 12) {
  ExperimentConfig c;
  c.state = StateSpec::white_noise(3);
  c.counts = {CountMode::kMultinomial, 100};
  c.replicas = replicas;
  c.master_seed = 17;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qst_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

TEST(RunEnsemble, IndependentOfThreadCount) {
  const auto one = run_ensemble(small_config(), {1, {}});
  const auto two = run_ensemble(small_config(), {2, {}});
  const auto four = run_ensemble(small_config(), {4, {}});
  EXPECT_EQ(format_spectra_csv(one.rows), format_spectra_csv(two.rows));
  EXPECT_EQ(format_spectra_csv(one.rows), format_spectra_csv(four.rows));
}

TEST(RunEnsemble, SingleReplicaRerunIsIdentical) {
  const auto config = small_config();
  const auto ensemble = run_ensemble(config);
  const ReplicaSimulator sim(config);
  const Eigen::VectorXd again = sim.spectrum(7);
  EXPECT_EQ(Eigen::VectorXd(ensemble.rows.row(7).transpose()), again);
}

TEST(RunEnsemble, RowsAreAscendingUnitTrace) {
  const auto ensemble = run_ensemble(small_config());
  for (Eigen::Index r = 0; r < ensemble.rows.rows(); ++r) {
    EXPECT_NEAR(ensemble.rows.row(r).sum(), 1.0, 1e-12);
    for (Eigen::Index c = 1; c < ensemble.rows.cols(); ++c) EXPECT_LE(ensemble.rows(r, c - 1), ensemble.rows(r, c));
  }
}

TEST(RunEnsemble, ProgressReportsEveryReplica) {
  std::size_t calls = 0, last = 0;
  run_ensemble(small_config(5), {2, [&](std::size_t done, std::size_t total) {
                                   ++calls;
                                   last = done;
                                   EXPECT_EQ(total, 5u);
                                 }});
  EXPECT_EQ(calls, 5u);
  EXPECT_EQ(last, 5u);
}

TEST(RunEnsemble, FailureReportsCompletedCount) {
  ExperimentConfig c = small_config(50);
  c.state = StateSpec::white_noise(1);
  c.counts = {CountMode::kPoisson, 1};
  try {
    run_ensemble(c);
    FAIL() << "expected EnsembleError";
  } catch (const EnsembleError& e) {
    EXPECT_LT(e.completed(), 50u);
    EXPECT_NE(std::string(e.what()).find("no events"), std::string::npos) << e.what();
  }
}

TEST(RunEnsemble, RejectsInvalidConfig) {
  ExperimentConfig c = small_config(0);
  EXPECT_THROW(run_ensemble(c), std::invalid_argument);
  c = small_config();
  c.scheme = Scheme::kComplete;
  c.total_counts = 0;
  EXPECT_THROW(run_ensemble(c), std::invalid_argument);
}

TEST(EnsembleIo, RoundTripIsBitIdentical) {
  const auto dir = scratch("roundtrip");
  const auto ensemble = run_ensemble(small_config());
  save_ensemble(ensemble, dir);
  const auto loaded = load_ensemble(dir);
  EXPECT_EQ(loaded.rows, ensemble.rows);
  EXPECT_EQ(nlohmann::json(loaded.config), nlohmann::json(ensemble.config));
  EXPECT_EQ(loaded.summary.m2, ensemble.summary.m2);
  const auto dir2 = scratch("roundtrip2");
  save_ensemble(loaded, dir2);
  EXPECT_EQ(slurp(dir / "spectra.csv"), slurp(dir2 / "spectra.csv"));
  EXPECT_EQ(slurp(dir / "checksum.txt"), slurp(dir2 / "checksum.txt"));
  const auto config = nlohmann::json::parse(slurp(dir / "config.json"));
  EXPECT_EQ(config["schema_version"], kEnsembleSchemaVersion);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST(EnsembleIo, TruncatedFileIsMalformed) {
  const auto dir = scratch("truncated");
  save_ensemble(run_ensemble(small_config()), dir);
  const std::string csv = slurp(dir / "spectra.csv");
  spit(dir / "spectra.csv", csv.substr(0, csv.size() - 10));
  EXPECT_THROW(load_ensemble(dir), MalformedFileError);
  fs::remove_all(dir);
}

TEST(EnsembleIo, ColumnMismatchIsDimensionError) {
  const auto dir = scratch("columns");
  save_ensemble(run_ensemble(small_config()), dir);
  auto config = nlohmann::json::parse(slurp(dir / "config.json"));
  config["state"]["n"] = 2;
  spit(dir / "config.json", config.dump());
  EXPECT_THROW(load_ensemble(dir), DimensionError);
  fs::remove_all(dir);
}

TEST(EnsembleIo, NewerVersionIsRefused) {
  const auto dir = scratch("version");
  save_ensemble(run_ensemble(small_config()), dir);
  auto config = nlohmann::json::parse(slurp(dir / "config.json"));
  config["schema_version"] = kEnsembleSchemaVersion + 1;
  spit(dir / "config.json", config.dump());
  EXPECT_THROW(load_ensemble(dir), VersionMismatchError);
  fs::remove_all(dir);
}

TEST(EnsembleIo, TamperedDataFailsChecksum) {
  const auto dir = scratch("tamper");
  save_ensemble(run_ensemble(small_config()), dir);
  std::string csv = slurp(dir / "spectra.csv");
  // Change the last digit of the first eigenvalue; the row still sums to 1.
  const auto pos = csv.find(',', csv.find('\n') + 1);
  const auto end = csv.find(',', pos + 1);
  char& digit = csv[end - 1];
  digit = digit == '1' ? '2' : '1';
  spit(dir / "spectra.csv", csv);
  EXPECT_THROW(load_ensemble(dir), ChecksumError);
  fs::remove_all(dir);
}

TEST(EnsembleIo, MissingDirectoryIsMalformed) {
  EXPECT_THROW(load_ensemble(scratch("absent")), MalformedFileError);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(EmpiricalMoments, DegenerateSpectraHaveZeroMoments) {
  SpectrumRows rows = SpectrumRows::Constant(3, 4, 0.25);
  const auto m = empirical_moments(rows, 6);
  EXPECT_EQ(m(0), 1.0);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(m(k), 0.0) << k;
  const auto s = summarize(rows);
  EXPECT_EQ(s.pooled_mean, 0.25);
  EXPECT_EQ(s.unphysical_fraction, 0.0);
}

TEST(EmpiricalMoments, HandComputed) {
  SpectrumRows rows(2, 2);
  rows << -0.5, 1.5, 0.0, 1.0;
  const auto m = empirical_moments(rows, 4);
  // Pooled mean 0.5; deviations -1, 1, -0.5, 0.5.
  EXPECT_DOUBLE_EQ(m(2), (1 + 1 + 0.25 + 0.25) / 4);
  EXPECT_DOUBLE_EQ(m(3), 0.0);
  EXPECT_DOUBLE_EQ(m(4), (1 + 1 + 0.0625 + 0.0625) / 4);
  EXPECT_EQ(summarize(rows).unphysical_fraction, 0.5);
  EXPECT_THROW(empirical_moments(SpectrumRows(0, 2), 2), std::invalid_argument);
}

TEST(EmpiricalMoments, PooledMeanAndOddMoment) {
  ExperimentConfig c = small_config(200);
  c.state = StateSpec::white_noise(4);
  const auto ensemble = run_ensemble(c);
  const auto m = empirical_moments(ensemble, 3);
  // Every row has unit trace, so the pooled mean is exactly 1/d.
  EXPECT_NEAR(ensemble.summary.pooled_mean, 1.0 / 16, 1e-14);
  EXPECT_LT(std::abs(m(3)), 4 * std::sqrt(15 * m(2) * m(2) * m(2) / (200.0 * 16)));
}

TEST(EmpiricalMoments, SemicircleRatiosAtSmallScale) {
  ExperimentConfig c = small_config(60);
  c.state = StateSpec::white_noise(5);
  const auto m = empirical_moments(run_ensemble(c), 6);
  EXPECT_NEAR(m(4) / (m(2) * m(2)), 2.0, 0.15);
  EXPECT_NEAR(m(6) / (m(2) * m(2) * m(2)), 5.0, 0.8);
}

TEST(ConfigJson, RoundTrip) {
  ExperimentConfig c = small_config();
  c.scheme = Scheme::kComplete;
  c.total_counts = 40000;
  c.state = StateSpec::ghz(3, 0.7);
  const auto back = nlohmann::json(c).get<ExperimentConfig>();
  EXPECT_EQ(nlohmann::json(back), nlohmann::json(c));
  EXPECT_EQ(scheme_from_string("complete"), Scheme::kComplete);
  EXPECT_THROW(scheme_from_string("tetrahedral"), std::invalid_argument);
}

}  // namespace
}  // namespace qst
