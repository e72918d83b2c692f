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

// Downstream text classification with transferred graphs. The classifier is
// embeddings -> GRU -> self-attention (residual) -> mean pool -> linear; a
// fusion step with mixed graphs is inserted at the embeddings or after the
// GRU.

#ifndef RELGRAPH_DOWNSTREAM_H_
#define RELGRAPH_DOWNSTREAM_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relgraph/checkpoint.h"
#include "relgraph/config.h"
#include "relgraph/context_objective.h"
#include "relgraph/corpus.h"
#include "relgraph/nn.h"
#include "relgraph/transfer.h"

namespace relgraph {

enum class GraphMode { kLearned, kUniform, kNone };
enum class FusionSite { kEmbeddings, kRnnStates };

// "glomo" and "learned" both name the pretrained-graph mode.
GraphMode ParseGraphMode(const std::string& name);
const char* GraphModeName(GraphMode mode);
FusionSite ParseFusionSite(const std::string& name);
const char* FusionSiteName(FusionSite site);

struct DownstreamConfig {
  std::string task = "synthetic-pointer";  // or "csv"
  PointerTaskSpec pointer;
  std::size_t train_size = 5000;
  std::size_t test_size = 1000;
  std::uint64_t data_seed = 1234;
  std::string train_csv;
  std::string test_csv;

  int embedding_dim = 32;  // d_h
  std::string site = "rnn-states";
  std::string graph_mode = "glomo";
  // Expected pretraining variant; checked against the checkpoint.
  AblationFlags ablation;
  int layers = 0;  // 0: whatever the checkpoint holds
  int heads = 0;
  bool allow_unknown_tokens = false;

  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int epochs = 12;
  int batch_size = 16;
  double learning_rate = 3e-3;
  double grad_clip = 5.0;

  std::string checkpoint_path;
  std::string report_path;

  void Validate() const;
};

Json ToJson(const DownstreamConfig& config);
DownstreamConfig DownstreamConfigFromJson(const Json& json);

struct Example {
  std::vector<int> ids;
  int label = 0;
};

struct TaskData {
  Vocab vocab;
  std::vector<std::string> labels;  // class id -> label text
  std::vector<Example> train;
  std::vector<Example> test;
};

struct RawExample {
  std::string text;
  std::string label;
};

// CSV with a header naming text and label columns; RFC 4180 quoting.
std::vector<RawExample> ReadLabeledCsv(const std::string& path);

// Encodes with `vocab`. Unknown tokens are rejected with a remediation hint
// unless `allow_unknown` is set, in which case they map to the unknown id.
TaskData EncodeTask(const std::vector<RawExample>& train, const std::vector<RawExample>& test, Vocab vocab,
                    bool allow_unknown);

// Frozen graph source built from a checkpoint.
class PretrainedGraphs {
 public:
  explicit PretrainedGraphs(const Checkpoint& checkpoint);

  const Vocab& vocab() const { return vocab_; }
  int layers() const { return model_->config().layers; }
  int heads() const { return model_->config().heads; }
  AffinityStack Extract(std::span<const int> ids, Direction direction) const;
  // Per-layer graphs and their cumulative products. The graph network is
  // frozen, so results are memoized per (sequence, direction).
  const std::pair<AffinityStack, AffinityStack>& Levels(std::span<const int> ids, Direction direction) const;
  // Raw bytes of every graph parameter, for the frozen check.
  std::vector<double> Snapshot() const;
  const LatentGraphModel& model() const { return *model_; }

 private:
  Vocab vocab_;
  std::unique_ptr<LatentGraphModel> model_;
  mutable std::map<std::pair<std::vector<int>, int>, std::pair<AffinityStack, AffinityStack>> levels_;
};

class TransferClassifier {
 public:
  TransferClassifier(std::size_t vocab_size, std::size_t classes, std::size_t width, GraphMode mode,
                     FusionSite site, int layers, int heads, std::uint64_t seed);

  // Sequences of one common length, processed together. [B, classes].
  Tensor Logits(const std::vector<std::span<const int>>& batch, const PretrainedGraphs* graphs) const;
  // [1, classes]
  Tensor Logits(std::span<const int> ids, const PretrainedGraphs* graphs) const;
  std::vector<int> Predict(const std::vector<std::span<const int>>& batch, const PretrainedGraphs* graphs) const;

  ParameterSet& params() { return params_; }
  const MixtureSpec& mixture() const { return mixture_; }

 private:
  // (forward mix, backward mix) for one sequence.
  std::pair<Tensor, Tensor> Graphs(std::span<const int> ids, const PretrainedGraphs* graphs) const;
  Tensor Attend(const Tensor& h) const;

  GraphMode mode_;
  FusionSite site_;
  std::size_t width_;
  ParameterSet params_;
  Tensor embedding_;
  MixtureSpec mixture_;
  FusionParams fusion_;
  GruCell rnn_;
  Linear query_, key_, value_;
  Linear head_;
};

struct SeedResult {
  std::uint64_t seed = 0;
  double accuracy = 0.0;
};

struct DownstreamReport {
  GraphMode mode = GraphMode::kNone;
  std::vector<SeedResult> runs;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  bool graph_params_unchanged = true;
  Json config;

  Json ToJson() const;
};

// Builds the task (synthetic or CSV), trains one classifier per seed and
// reports test accuracy. The pretrained graph network is never updated.
DownstreamReport RunDownstream(const DownstreamConfig& config);

// As above with an already loaded checkpoint (may be null unless the mode is
// the learned one).
DownstreamReport RunDownstream(const DownstreamConfig& config, const Checkpoint* checkpoint);

}  // namespace relgraph

#endif  // RELGRAPH_DOWNSTREAM_H_
