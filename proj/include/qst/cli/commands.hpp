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

#ifndef QST_CLI_COMMANDS_HPP
#define QST_CLI_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qst/ensemble.hpp"
#include "qst/hypothesis.hpp"

namespace qst::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Invalid flag value; the message names the flag.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PredictOptions {
  int qubits = 0;
  double counts = 0.0;
  std::optional<double> q;
  /// Defaults to 1 when q > 0, else 0.
  std::optional<int> rank;
};

nlohmann::json cmd_predict(const PredictOptions& opts);

std::int64_t cmd_min_counts(int qubits, double q);

struct SimulateOptions {
  ExperimentConfig config;
  std::filesystem::path out;
  unsigned threads = 1;
};

/// Runs the ensemble, writes it to `opts.out`, and returns its summary.
nlohmann::json cmd_simulate(const SimulateOptions& opts, std::ostream* progress = nullptr);

struct AnalyzeOptions {
  std::filesystem::path in;
  /// Defaults to `in`.
  std::optional<std::filesystem::path> out;
  int bins = 100;
};

/// Writes histogram.csv, overlay.csv and summary.json; returns the summary.
nlohmann::json cmd_analyze(const AnalyzeOptions& opts);

/// Summary shared by `simulate` and `analyze`.
nlohmann::json ensemble_summary_json(const SpectrumEnsemble& ensemble);

struct RankTestOptions {
  std::optional<std::filesystem::path> eigenvalues;
  std::optional<std::filesystem::path> ensemble;
  std::optional<std::size_t> replica;
  std::optional<double> counts;
  std::optional<int> qubits;
  double significance = 0.05;
  int max_rank = 5;
};

RankTestReport cmd_rank_test(const RankTestOptions& opts);

nlohmann::json rank_report_json(const RankTestReport& report);
std::string format_rank_table(const RankTestReport& report);

/// Reads one eigenvalue per line; blank lines and '#' comments are skipped.
std::vector<double> read_eigenvalue_file(const std::filesystem::path& path);

/// Full command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qst::cli

#endif  // QST_CLI_COMMANDS_HPP
