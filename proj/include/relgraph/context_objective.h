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

#ifndef RELGRAPH_CONTEXT_OBJECTIVE_H_
#define RELGRAPH_CONTEXT_OBJECTIVE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relgraph/config.h"
#include "relgraph/feature_predictor.h"
#include "relgraph/graph_predictor.h"
#include "relgraph/nn.h"

namespace relgraph {

// Teacher-forced GRU decoder predicting up to D context tokens from one
// feature vector. Input embeddings are borrowed from the feature network.
class ContextDecoder {
 public:
  ContextDecoder() = default;
  ContextDecoder(const ModelConfig& config, const std::string& prefix, ParameterSet& params, Rng& rng);

  // features: [N, d_f]. Row n starts from tanh(init(features[n])), reads
  // first_inputs[n], then its own targets; targets[n] may be shorter than D
  // (or empty). Returns per-row NLL sums, [N].
  Tensor WindowNll(const Tensor& features, std::span<const int> first_inputs,
                   const std::vector<std::vector<int>>& targets, const Tensor& embedding) const;

  // Single position: -sum log P(window | current, f_t). Empty window -> 0.
  Tensor PositionNll(const Tensor& feature, int current, std::span<const int> window,
                     const Tensor& embedding) const;

  const Linear& init() const { return init_; }
  const Linear& output() const { return output_; }

 private:
  Linear init_;
  GruCell cell_;
  Linear output_;
};

// g + f + one decoder per direction, with a single parameter registry.
class LatentGraphModel {
 public:
  LatentGraphModel(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  bool has_graph_network() const { return graph_.has_value(); }
  const GraphPredictor& graph() const { return *graph_; }
  const FeaturePredictor& features() const { return features_; }
  const ContextDecoder& decoder(Direction direction) const { return decoders_[static_cast<int>(direction)]; }

  // Every parameter in registration order: g.*, f.*, dec.*
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  // The part transferred downstream: g.* when decoupled; otherwise f.*.
  ParameterSet GraphParams() const;

  // Graphs of one direction, from g (or from f when decoupling is off).
  AffinityStack ExtractGraphs(std::span<const int> tokens, Direction direction) const;
  // F^L of one direction; optionally returns the graphs used.
  Tensor ForwardFeatures(std::span<const int> tokens, Direction direction,
                         AffinityStack* graphs_out = nullptr) const;

 private:
  ModelConfig config_;
  Rng init_rng_;
  ParameterSet params_;
  std::optional<GraphPredictor> graph_;
  FeaturePredictor features_;
  ContextDecoder decoders_[2];
};

struct ObjectiveValue {
  Tensor loss;                  // normalized by predicted-token count
  std::size_t predicted_tokens = 0;
};

// Per-position context prediction in both directions, summed and divided by
// the number of predicted tokens. Needs T >= 2. With the sequence-level
// objective selected, dispatches to SequenceLevelLoss.
ObjectiveValue TotalLoss(const LatentGraphModel& model, std::span<const int> tokens);

// Forward (or backward) per-position NLL values, unnormalized.
std::vector<double> PositionLosses(const LatentGraphModel& model, std::span<const int> tokens,
                                   Direction direction);

// Sequence-level objective. `tokens` holds D leading tokens, the T-token
// window, and D trailing tokens. The forward decoder starts from the mean of
// forward F^L over the window and predicts the trailing tokens; the backward
// one symmetrically predicts the leading tokens in reverse order.
ObjectiveValue SequenceLevelLoss(const LatentGraphModel& model, std::span<const int> tokens);

}  // namespace relgraph

#endif  // RELGRAPH_CONTEXT_OBJECTIVE_H_
