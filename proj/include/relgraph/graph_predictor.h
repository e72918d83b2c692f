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

// The graph network: causal key/query CNNs over token embeddings, followed by
// per-layer, per-head projections whose dot-product scores are turned into
// column-stochastic affinity matrices.
//
// Matrices are stored row-major as (source j, target t): entry j*T + t is the
// weight with which position j contributes to position t, so every column
// sums to one.

#ifndef RELGRAPH_GRAPH_PREDICTOR_H_
#define RELGRAPH_GRAPH_PREDICTOR_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "relgraph/config.h"
#include "relgraph/ops.h"
#include "relgraph/params.h"

namespace relgraph {

struct AffinityStack {
  Direction direction = Direction::kForward;
  int layers = 0;
  int heads = 0;
  std::size_t length = 0;
  std::vector<Tensor> graphs;  // index layer * heads + head

  const Tensor& at(int layer, int head) const { return graphs.at(layer * heads + head); }
};

// Forward: source j may feed target t iff j <= t. Backward: iff j >= t.
inline bool Allowed(std::size_t j, std::size_t t, Direction direction) {
  return direction == Direction::kForward ? j <= t : j >= t;
}

// T*T row-major 0/1 mask over (j, t).
std::vector<std::uint8_t> CausalMask(std::size_t length, Direction direction);
Tensor CausalMaskTensor(std::size_t length, Direction direction);

// scores[j][t] = (keys[j] Wk) . (queries[t] Wq) + bias
Tensor AffinityScores(const Tensor& keys, const Tensor& queries, const Tensor& wk, const Tensor& wq,
                      const Tensor& bias);

// Masked relu(s)^2 normalized per column; an all-zero column becomes one-hot
// on the diagonal.
Tensor SquaredReluAffinity(const Tensor& scores, Direction direction);
// Masked softmax per column (the non-sparse ablation).
Tensor SoftmaxAffinity(const Tensor& scores, Direction direction);
Tensor AffinityFromScores(const Tensor& scores, Direction direction, bool sparse);

struct KeyQuery {
  Tensor keys;     // [T, d_g]
  Tensor queries;  // [T, d_g]
};

class GraphPredictor {
 public:
  GraphPredictor(const ModelConfig& config, Rng& rng);

  KeyQuery Encode(std::span<const int> tokens, Direction direction) const;
  Tensor Affinity(const KeyQuery& kq, int layer, int head, Direction direction) const;
  AffinityStack Predict(std::span<const int> tokens, Direction direction) const;
  // (forward stack, backward stack)
  std::pair<AffinityStack, AffinityStack> PredictGraphs(std::span<const int> tokens) const;

  const ModelConfig& config() const { return config_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  const Tensor& bias(Direction direction) const { return side(direction).bias; }

 private:
  struct ConvStack {
    std::vector<Tensor> weights;  // [width * d_g, d_g]
    std::vector<Tensor> biases;   // [d_g]
  };
  struct Side {
    ConvStack key;
    ConvStack query;
    std::vector<Tensor> wk;  // index layer * heads + head, [d_g, d_a]
    std::vector<Tensor> wq;
    Tensor bias;  // scalar
  };

  const Side& side(Direction direction) const { return sides_[static_cast<int>(direction)]; }
  Tensor RunStack(const ConvStack& stack, const Tensor& x, Direction direction) const;

  ModelConfig config_;
  ParameterSet params_;
  Tensor embedding_;  // [V, d_g]
  Side sides_[2];
};

}  // namespace relgraph

#endif  // RELGRAPH_GRAPH_PREDICTOR_H_
