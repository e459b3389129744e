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

#ifndef QST_ENSEMBLE_HPP
#define QST_ENSEMBLE_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string_view>

#include <json.hpp>

#include "qst/sampling.hpp"
#include "qst/state.hpp"
#include "qst/types.hpp"

namespace qst {

enum class Scheme { kOvercomplete, kComplete };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

struct ExperimentConfig {
  StateSpec state;
  Scheme scheme = Scheme::kOvercomplete;
  /// Per-setting statistics for the overcomplete scheme.
  CountModel counts;
  /// Event budget for the complete scheme (Poisson, flux N_total / 2^n).
  std::int64_t total_counts = 0;
  std::size_t replicas = 1;
  std::uint64_t master_seed = 0;
};

void validate(const ExperimentConfig& config);

struct EnsembleSummary {
  double unphysical_fraction = 0.0;
  double pooled_mean = 0.0;
  /// Pooled central moments of orders 2, 4 and 6.
  double m2 = 0.0;
  double m4 = 0.0;
  double m6 = 0.0;
};

struct SpectrumEnsemble {
  ExperimentConfig config;
  /// Row i holds the ascending spectrum of replica i.
  SpectrumRows rows;
  EnsembleSummary summary;

  int qubits() const { return config.state.n; }
  std::size_t replicas() const { return static_cast<std::size_t>(rows.rows()); }
};

/// Raised when a run stops early; `completed()` replicas finished.
class EnsembleError : public Error {
 public:
  EnsembleError(const std::string& what, std::size_t completed)
      : Error(what), completed_(completed) {}
  std::size_t completed() const { return completed_; }

 private:
  std::size_t completed_;
};

struct RunOptions {
  /// Worker threads; 0 means one.
  unsigned threads = 1;
  /// Called with (finished, total) after each replica, serialized.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Simulates `config.replicas` tomography runs. Each replica draws from
/// streams keyed by (master_seed, replica, setting), so the result does not
/// depend on the worker count or scheduling.
SpectrumEnsemble run_ensemble(const ExperimentConfig& config, const RunOptions& options = {});

/// Exact outcome distributions for a configuration, shared read-only by
/// all replicas.
class ReplicaSimulator {
 public:
  explicit ReplicaSimulator(const ExperimentConfig& config);

  const DensityMatrix& state() const { return state_; }

  /// Linear estimate of one replica.
  DensityMatrix estimate(std::size_t replica) const;
  /// Ascending spectrum of one replica.
  Eigen::VectorXd spectrum(std::size_t replica) const;

 private:
  ExperimentConfig config_;
  DensityMatrix state_;
  /// Overcomplete: one row per setting. Complete: a single row of 4^n
  /// expected projector counts.
  Eigen::MatrixXd probabilities_;
};

/// Pooled central moments m_0..m_{k_max} (m_0 = 1, m_1 = 0) about the
/// pooled mean.
Eigen::VectorXd empirical_moments(const SpectrumEnsemble& ensemble, int k_max);
Eigen::VectorXd empirical_moments(const SpectrumRows& rows, int k_max);

EnsembleSummary summarize(const SpectrumRows& rows);

/// Schema version written to config.json; files with a newer version are refused.
inline constexpr int kEnsembleSchemaVersion = 1;

class MalformedFileError : public Error {
 public:
  using Error::Error;
};
class VersionMismatchError : public Error {
 public:
  using Error::Error;
};
class ChecksumError : public Error {
 public:
  using Error::Error;
};

/// Writes `dir/config.json`, `dir/spectra.csv` and `dir/checksum.txt`.
void save_ensemble(const SpectrumEnsemble& ensemble, const std::filesystem::path& dir);
SpectrumEnsemble load_ensemble(const std::filesystem::path& dir);

/// Text of spectra.csv: header `replica,l_1,...` and 17 significant digits.
std::string format_spectra_csv(const SpectrumRows& rows);

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

void to_json(nlohmann::json& j, const ExperimentConfig& config);
void from_json(const nlohmann::json& j, ExperimentConfig& config);

std::string_view code_version();

}  // namespace qst

#endif  // QST_ENSEMBLE_HPP
