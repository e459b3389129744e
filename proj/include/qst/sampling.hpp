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

#ifndef QST_SAMPLING_HPP
#define QST_SAMPLING_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "qst/types.hpp"

namespace qst {

enum class CountMode { kMultinomial, kPoisson };

std::string_view to_string(CountMode mode);
CountMode count_mode_from_string(std::string_view name);

struct CountModel {
  CountMode mode = CountMode::kMultinomial;
  /// Fixed total (multinomial) or expected total (Poisson) per setting.
  std::int64_t events_per_setting = 100;
};

/// Identifies one independent random stream.
struct SeedPolicy {
  std::uint64_t master_seed = 0;
  std::uint64_t replica = 0;
  std::uint64_t setting = 0;
};

/// SplitMix64 run as a counter-based generator: the state is a 64-bit
/// counter advanced by the golden-ratio increment and each output is the
/// SplitMix64 finalizer of the counter (period 2^64). The initial counter
/// is derived from a SeedPolicy by chaining the finalizer over
/// (master_seed, replica, setting), so every stream is a pure function of
/// those three values.
class StreamGenerator {
 public:
  using result_type = std::uint64_t;

  explicit StreamGenerator(std::uint64_t state) : state_(state) {}
  explicit StreamGenerator(const SeedPolicy& policy);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kIncrement;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kIncrement = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

struct CountRecord {
  /// Setting index (base 3) or projector index (base 4, complete scheme).
  std::size_t setting = 0;
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;
};

/// One draw of outcome counts. Multinomial draws use sequential
/// conditional-binomial splitting; Poisson draws are independent per
/// outcome with mean N * p_r.
CountRecord sample_counts(std::span<const double> probs, const CountModel& model,
                          const SeedPolicy& seed_ctx);

/// Poisson counts with the given per-outcome means, one stream per call.
std::vector<std::int64_t> sample_poisson(std::span<const double> means, StreamGenerator& rng);

/// Relative frequencies c_r / N_s. Throws EmptySettingError when N_s == 0.
Eigen::VectorXd frequencies(const CountRecord& record);

}  // namespace qst

#endif  // QST_SAMPLING_HPP
