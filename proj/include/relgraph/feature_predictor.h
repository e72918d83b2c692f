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

#ifndef RELGRAPH_FEATURE_PREDICTOR_H_
#define RELGRAPH_FEATURE_PREDICTOR_H_

#include <span>
#include <utility>
#include <vector>

#include "relgraph/config.h"
#include "relgraph/graph_predictor.h"
#include "relgraph/nn.h"
#include "relgraph/params.h"

namespace relgraph {

// Graph-weighted message passing: each layer replaces f_t with
// v(mean_h sum_j G_jt f_j, f_t), v a GRU cell (or linear + residual).
// One cell stack per direction; the embedding table is shared.
class FeaturePredictor {
 public:
  FeaturePredictor(const ModelConfig& config, Rng& rng);

  Tensor Embed(std::span<const int> tokens) const;

  // m_t = (1/n_h) sum_h sum_j G_jt f_j. features: [T, d]; graphs: n_h [T, T].
  static Tensor Aggregate(const Tensor& features, std::span<const Tensor> graphs);

  Tensor ComposeLayer(const Tensor& prev, std::span<const Tensor> graphs, int layer,
                      Direction direction) const;

  // Decoupled path: graphs come from the graph network.
  Tensor Forward(std::span<const int> tokens, const AffinityStack& stack) const;

  // Coupled path (decoupling disabled): layer l's graphs are computed from
  // linear key/query maps of F^{l-1}. Returns F^L and the graphs used.
  std::pair<Tensor, AffinityStack> ForwardCoupled(std::span<const int> tokens, Direction direction) const;

  const ModelConfig& config() const { return config_; }
  const Tensor& embedding() const { return embedding_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }

 private:
  struct CoupledMaps {
    std::vector<Tensor> wk;  // [d_f, d_a], index layer * heads + head
    std::vector<Tensor> wq;
    Tensor bias;
  };

  ModelConfig config_;
  ParameterSet params_;
  Tensor embedding_;
  std::vector<GruCell> cells_[2];
  std::vector<Linear> residual_[2];
  CoupledMaps coupled_[2];
};

}  // namespace relgraph

#endif  // RELGRAPH_FEATURE_PREDICTOR_H_
