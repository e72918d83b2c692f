// Copyright 2026 The relgraph Authors.
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

#include "relgraph/batching.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "relgraph/errors.h"

namespace relgraph {

std::vector<Batch> MakeBatches(std::span<const int> ids, std::size_t window, std::size_t batch_size,
                               std::uint64_t seed) {
  if (window == 0 || batch_size == 0) throw ValidationError("make_batches: window and batch size must be positive");
  if (ids.size() < window) {
    throw ValidationError("make_batches: corpus of " + std::to_string(ids.size()) +
                          " tokens is shorter than the window length " + std::to_string(window));
  }
  std::vector<std::size_t> order(ids.size() / window);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Batch> batches;
  for (std::size_t first = 0; first < order.size(); first += batch_size) {
    Batch b;
    b.rows = std::min(batch_size, order.size() - first);
    b.cols = window;
    b.ids.reserve(b.rows * window);
    for (std::size_t r = 0; r < b.rows; ++r) {
      const std::size_t start = order[first + r] * window;
      b.starts.push_back(start);
      b.ids.insert(b.ids.end(), ids.begin() + start, ids.begin() + start + window);
    }
    batches.push_back(std::move(b));
  }
  return batches;
}

}  // namespace relgraph
