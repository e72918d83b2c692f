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

#ifndef RELGRAPH_TRAINER_H_
#define RELGRAPH_TRAINER_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "relgraph/batching.h"
#include "relgraph/config.h"
#include "relgraph/context_objective.h"
#include "relgraph/vocab.h"

namespace relgraph {

// Corpus text named by the config: the file at corpus_path, or the synthetic
// generator when synthetic.kind is set.
std::string LoadCorpus(const TrainConfig& config);

struct TrainResult {
  Vocab vocab;
  std::unique_ptr<LatentGraphModel> model;
  std::vector<double> losses;  // mean objective of each step's batch, before its update
};

// Pretrains g, f and the decoders. Writes metrics (one JSON line per step)
// and checkpoints when the config names paths for them; periodic
// checkpoints go to <checkpoint_path>.step<N>. Throws NonFiniteLossError if
// the objective stops being finite.
TrainResult Train(const TrainConfig& config, const std::string& corpus);

// Mean objective over the given batches without recording gradients.
double MeanLoss(const LatentGraphModel& model, std::span<const Batch> batches);

}  // namespace relgraph

#endif  // RELGRAPH_TRAINER_H_
