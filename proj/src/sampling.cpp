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

#include "qst/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace qst {
namespace {

constexpr double kProbabilityTolerance = 1e-9;

void check_probabilities(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("empty probability vector");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -kProbabilityTolerance || !std::isfinite(p)) {
      throw std::domain_error("negative probability in outcome distribution");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw std::domain_error("outcome probabilities do not sum to 1");
  }
}

}  // namespace

std::string_view to_string(CountMode mode) {
  return mode == CountMode::kMultinomial ? "multinomial" : "poisson";
}

CountMode count_mode_from_string(std::string_view name) {
  if (name == "multinomial") return CountMode::kMultinomial;
  if (name == "poisson") return CountMode::kPoisson;
  throw std::invalid_argument("unknown count mode '" + std::string(name) + "'");
}

StreamGenerator::StreamGenerator(const SeedPolicy& policy) {
  std::uint64_t s = mix(policy.master_seed + kIncrement);
  s = mix(s ^ (policy.replica + 0x6a09e667f3bcc909ULL));
  s = mix(s ^ (policy.setting + 0xbb67ae8584caa73bULL));
  state_ = s;
}

std::vector<std::int64_t> sample_poisson(std::span<const double> means, StreamGenerator& rng) {
  std::vector<std::int64_t> counts(means.size(), 0);
  for (std::size_t r = 0; r < means.size(); ++r) {
    if (means[r] > 0.0) {
      std::poisson_distribution<std::int64_t> dist(means[r]);
      counts[r] = dist(rng);
    }
  }
  return counts;
}

CountRecord sample_counts(std::span<const double> probs, const CountModel& model,
                          const SeedPolicy& seed_ctx) {
  check_probabilities(probs);
  if (model.events_per_setting < 1) throw std::invalid_argument("events per setting must be >= 1");

  StreamGenerator rng(seed_ctx);
  CountRecord rec;
  rec.setting = seed_ctx.setting;
  rec.counts.assign(probs.size(), 0);

  if (model.mode == CountMode::kPoisson) {
    std::vector<double> means(probs.size());
    const double n = static_cast<double>(model.events_per_setting);
    for (std::size_t r = 0; r < probs.size(); ++r) means[r] = n * std::max(probs[r], 0.0);
    rec.counts = sample_poisson(means, rng);
    for (auto c : rec.counts) rec.total += c;
    return rec;
  }

  std::size_t last = probs.size() - 1;
  while (last > 0 && !(probs[last] > 0.0)) --last;
  // Suffix sums avoid drift from repeated subtraction.
  std::vector<double> tail(last + 2, 0.0);
  for (std::size_t r = last + 1; r-- > 0;) tail[r] = tail[r + 1] + std::max(probs[r], 0.0);

  std::int64_t remaining = model.events_per_setting;
  for (std::size_t r = 0; r < last && remaining > 0; ++r) {
    const double p = std::max(probs[r], 0.0);
    if (!(p > 0.0)) continue;
    const double cond = std::clamp(p / tail[r], 0.0, 1.0);
    std::int64_t draw = remaining;
    if (cond < 1.0) {
      std::binomial_distribution<std::int64_t> dist(remaining, cond);
      draw = dist(rng);
    }
    rec.counts[r] = draw;
    remaining -= draw;
  }
  rec.counts[last] += remaining;
  rec.total = model.events_per_setting;
  return rec;
}

Eigen::VectorXd frequencies(const CountRecord& record) {
  if (record.total <= 0) {
    throw EmptySettingError("setting " + std::to_string(record.setting) + " recorded no events");
  }
  Eigen::VectorXd f(static_cast<Eigen::Index>(record.counts.size()));
  const double total = static_cast<double>(record.total);
  for (std::size_t r = 0; r < record.counts.size(); ++r) {
    f(static_cast<Eigen::Index>(r)) = static_cast<double>(record.counts[r]) / total;
  }
  return f;
}

}  // namespace qst
