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

#ifndef RELGRAPH_BATCHING_H_
#define RELGRAPH_BATCHING_H_

#include <cstdint>
#include <span>
#include <vector>

namespace relgraph {

// Row-major [rows, cols] token ids.
struct Batch {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<int> ids;
  std::vector<std::size_t> starts;  // corpus offset of each row

  std::span<const int> row(std::size_t r) const { return {ids.data() + r * cols, cols}; }
};

// Cuts the corpus into floor(N / T) contiguous non-overlapping windows,
// shuffles them with `seed`, and groups them into batches of `batch_size`
// rows (the last batch may be smaller). Throws ValidationError when the
// corpus is shorter than one window.
std::vector<Batch> MakeBatches(std::span<const int> ids, std::size_t window, std::size_t batch_size,
                               std::uint64_t seed);

}  // namespace relgraph

#endif  // RELGRAPH_BATCHING_H_
