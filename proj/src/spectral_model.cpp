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

#include "qst/spectral_model.hpp"

#include <limits>
#include <string>

namespace qst {

std::int64_t min_counts(int n, double q) {
  require_qubits(n, kMaxAnalyticQubits);
  if (q == 1.0) throw DivergenceError("minimum count diverges for q -> 1");
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in [0, 1)");
  using L = long double;
  // Smallest N with semicircle_radius(n, N, 0) <= semicircle_center(n, q, 1).
  const L ratio = (static_cast<L>(dimension(n)) - 1) / (1 - static_cast<L>(q));
  const L second_moment = (std::pow(L(10), n) - 1) / std::pow(L(12), n);
  const L bound = 4 * second_moment * ratio * ratio;
  if (bound > static_cast<L>(std::numeric_limits<std::int64_t>::max())) {
    throw OverflowError("minimum count exceeds the 64-bit range");
  }
  return static_cast<std::int64_t>(std::ceil(bound));
}

std::uint64_t catalan(int k) {
  if (k < 0) throw std::invalid_argument("Catalan index must be >= 0");
  unsigned __int128 c = 1;
  for (int j = 0; j < k; ++j) {
    c = c * (2 * (2 * static_cast<unsigned>(j) + 1)) / (static_cast<unsigned>(j) + 2);
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      throw OverflowError("Catalan number C_" + std::to_string(k) + " exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace qst
