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

// Single-file checkpoint: "RGCK", u32 format version, u64 manifest length,
// the JSON manifest, then the parameter blob of little-endian f64 values.
// The manifest holds the training config, the vocabulary and one entry
// {name, shape, offset, length} per tensor, offsets and lengths in bytes.

#ifndef RELGRAPH_CHECKPOINT_H_
#define RELGRAPH_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relgraph/config.h"
#include "relgraph/params.h"
#include "relgraph/vocab.h"

namespace relgraph {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  TrainConfig config;
  Vocab vocab;
  std::int64_t step = 0;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor* Find(const std::string& name) const;
};

std::string SerializeCheckpoint(const TrainConfig& config, const Vocab& vocab, const ParameterSet& params,
                                std::int64_t step);
Checkpoint ParseCheckpoint(const std::string& bytes);

void SaveCheckpoint(const std::string& path, const TrainConfig& config, const Vocab& vocab,
                    const ParameterSet& params, std::int64_t step);
Checkpoint LoadCheckpoint(const std::string& path);

// Copies stored values into params. Every parameter must be present with
// the same shape.
void RestoreParameters(const Checkpoint& checkpoint, ParameterSet& params);

// Rejects a checkpoint whose graph stack is not layers x heads.
void RequireGraphShape(const Checkpoint& checkpoint, int layers, int heads);

}  // namespace relgraph

#endif  // RELGRAPH_CHECKPOINT_H_
