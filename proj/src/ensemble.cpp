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

#include "qst/ensemble.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <new>
#include <thread>
#include <vector>

#include "qst/complete_scheme.hpp"
#include "qst/estimation.hpp"
#include "qst/hypothesis.hpp"
#include "qst/pauli.hpp"

namespace qst {

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::kOvercomplete ? "overcomplete" : "complete";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "overcomplete") return Scheme::kOvercomplete;
  if (name == "complete") return Scheme::kComplete;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& config) {
  validate(config.state);
  if (config.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  if (config.scheme == Scheme::kOvercomplete) {
    if (config.counts.events_per_setting < 1) {
      throw std::invalid_argument("events per setting must be >= 1");
    }
  } else if (config.total_counts < 1) {
    throw std::invalid_argument("the complete scheme needs a positive total event count");
  }
}

ReplicaSimulator::ReplicaSimulator(const ExperimentConfig& config)
    : config_(config), state_(build_state(config.state)) {
  validate(config_);
  const int n = config_.state.n;
  if (config_.scheme == Scheme::kOvercomplete) {
    const std::size_t settings = num_settings(n);
    probabilities_.resize(static_cast<Eigen::Index>(settings), static_cast<Eigen::Index>(dimension(n)));
    for (std::size_t s = 0; s < settings; ++s) {
      probabilities_.row(static_cast<Eigen::Index>(s)) =
          outcome_probabilities(state_, Setting::from_index(n, s)).transpose();
    }
  } else {
    const auto frame = build_complete_frame(n);
    const double flux = complete_scheme_flux(n, static_cast<double>(config_.total_counts));
    probabilities_ = (complete_probabilities(*frame, state_) * flux).transpose();
  }
}

DensityMatrix ReplicaSimulator::estimate(std::size_t replica) const {
  const int n = config_.state.n;
  if (config_.scheme == Scheme::kOvercomplete) {
    const std::size_t settings = num_settings(n);
    std::vector<CountRecord> records;
    records.reserve(settings);
    Eigen::VectorXd probs(probabilities_.cols());
    for (std::size_t s = 0; s < settings; ++s) {
      probs = probabilities_.row(static_cast<Eigen::Index>(s)).transpose();
      records.push_back(sample_counts(std::span<const double>(probs.data(), static_cast<std::size_t>(probs.size())),
                                      config_.counts, {config_.master_seed, replica, s}));
    }
    return reconstruct_linear(estimate_correlations(records, n));
  }

  const auto frame = build_complete_frame(n);
  const auto projectors = static_cast<std::size_t>(probabilities_.cols());
  std::vector<std::int64_t> counts(projectors);
  for (std::size_t v = 0; v < projectors; ++v) {
    const double mean = probabilities_(0, static_cast<Eigen::Index>(v));
    StreamGenerator rng(SeedPolicy{config_.master_seed, replica, v});
    counts[v] = sample_poisson(std::span<const double>(&mean, 1), rng)[0];
  }
  return estimate_complete(*frame, counts, complete_scheme_flux(n, static_cast<double>(config_.total_counts)));
}

Eigen::VectorXd ReplicaSimulator::spectrum(std::size_t replica) const {
  return eigenvalues_of(estimate(replica)).eigenvalues;
}

SpectrumEnsemble run_ensemble(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  const ReplicaSimulator simulator(config);
  const auto dim = static_cast<Eigen::Index>(dimension(config.state.n));

  SpectrumEnsemble out;
  out.config = config;
  try {
    out.rows.resize(static_cast<Eigen::Index>(config.replicas), dim);
  } catch (const std::bad_alloc&) {
    throw EnsembleError("cannot allocate spectra for the requested replica count", 0);
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex mutex;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t replica = next.fetch_add(1);
      if (replica >= config.replicas) return;
      try {
        out.rows.row(static_cast<Eigen::Index>(replica)) = simulator.spectrum(replica).transpose();
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!first_error) first_error = std::current_exception();
        failed = true;
        return;
      }
      const std::size_t done = finished.fetch_add(1) + 1;
      if (options.progress) {
        std::lock_guard lock(mutex);
        options.progress(done, config.replicas);
      }
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::bad_alloc&) {
      throw EnsembleError("resource exhaustion during ensemble run", finished.load());
    } catch (const std::exception& e) {
      throw EnsembleError(std::string("ensemble run failed: ") + e.what(), finished.load());
    }
  }
  out.summary = summarize(out.rows);
  return out;
}

Eigen::VectorXd empirical_moments(const SpectrumRows& rows, int k_max) {
  if (rows.size() == 0) throw std::invalid_argument("empty ensemble");
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  const double mean = rows.mean();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(k_max + 1);
  const auto flat = rows.reshaped();
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    const double d = flat(i) - mean;
    double p = 1.0;
    for (int k = 0; k <= k_max; ++k) {
      m(k) += p;
      p *= d;
    }
  }
  m /= static_cast<double>(rows.size());
  m(0) = 1.0;
  if (k_max >= 1) m(1) = 0.0;
  return m;
}

Eigen::VectorXd empirical_moments(const SpectrumEnsemble& ensemble, int k_max) {
  return empirical_moments(ensemble.rows, k_max);
}

EnsembleSummary summarize(const SpectrumRows& rows) {
  EnsembleSummary s;
  s.unphysical_fraction = unphysical_fraction(rows);
  s.pooled_mean = rows.mean();
  const Eigen::VectorXd m = empirical_moments(rows, 6);
  s.m2 = m(2);
  s.m4 = m(4);
  s.m6 = m(6);
  return s;
}

}  // namespace qst
