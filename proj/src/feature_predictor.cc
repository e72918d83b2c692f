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

#include "relgraph/feature_predictor.h"

#include <string>

#include "relgraph/errors.h"
#include "relgraph/ops.h"

namespace relgraph {

FeaturePredictor::FeaturePredictor(const ModelConfig& config, Rng& rng) : config_(config) {
  config_.Validate();
  const std::size_t d = config_.feature_dim;
  embedding_ = params_.AddNormal("f.embed", {static_cast<std::size_t>(config_.vocab_size), d}, 0.1, rng);
  for (int s = 0; s < 2; ++s) {
    const std::string dir = s == 0 ? "f.fwd" : "f.bwd";
    for (int l = 0; l < config_.layers; ++l) {
      const std::string prefix = dir + ".l" + std::to_string(l);
      if (config_.composition == Composition::kGru) {
        cells_[s].push_back(GruCell::Create(params_, prefix + ".cell", d, d, rng));
      } else {
        residual_[s].push_back(Linear::Create(params_, prefix + ".residual", 2 * d, d, rng));
      }
    }
    if (!config_.decoupled) {
      const std::size_t da = config_.attention_dim;
      for (int l = 0; l < config_.layers; ++l) {
        for (int h = 0; h < config_.heads; ++h) {
          const std::string lh = ".l" + std::to_string(l) + ".h" + std::to_string(h);
          coupled_[s].wk.push_back(params_.AddUniform(dir + ".wk" + lh, {d, da}, rng));
          coupled_[s].wq.push_back(params_.AddUniform(dir + ".wq" + lh, {d, da}, rng));
        }
      }
      coupled_[s].bias = params_.AddConstant(dir + ".bias", {}, config_.bias_init);
    }
  }
}

Tensor FeaturePredictor::Embed(std::span<const int> tokens) const {
  return EmbeddingLookup(embedding_, tokens);
}

Tensor FeaturePredictor::Aggregate(const Tensor& features, std::span<const Tensor> graphs) {
  if (graphs.empty()) throw ShapeError("compose_layer: no graphs given");
  Tensor total;
  for (const Tensor& g : graphs) {
    if (g.rank() != 2 || g.dim(0) != features.dim(0) || g.dim(1) != features.dim(0)) {
      throw ShapeError("compose_layer: graph " + ShapeString(g.shape()) + " does not match features " +
                       ShapeString(features.shape()));
    }
    Tensor m = MatMul(Transpose(g), features);
    total = total.defined() ? Add(total, m) : m;
  }
  return graphs.size() == 1 ? total : Scale(total, 1.0 / static_cast<double>(graphs.size()));
}

Tensor FeaturePredictor::ComposeLayer(const Tensor& prev, std::span<const Tensor> graphs, int layer,
                                      Direction direction) const {
  const int s = static_cast<int>(direction);
  if (layer < 0 || layer >= config_.layers) {
    throw ShapeError("compose_layer: layer " + std::to_string(layer) + " outside " +
                     std::to_string(config_.layers) + " layers");
  }
  Tensor message = Aggregate(prev, graphs);
  if (config_.composition == Composition::kGru) return cells_[s][layer](message, prev);
  const Tensor parts[] = {message, prev};
  return Add(prev, residual_[s][layer](Concat(parts, 1)));
}

Tensor FeaturePredictor::Forward(std::span<const int> tokens, const AffinityStack& stack) const {
  if (stack.layers != config_.layers) {
    throw ShapeError("forward_features: stack has " + std::to_string(stack.layers) + " layers, model has " +
                     std::to_string(config_.layers));
  }
  if (stack.length != tokens.size()) {
    throw ShapeError("forward_features: stack length " + std::to_string(stack.length) +
                     " differs from sequence length " + std::to_string(tokens.size()));
  }
  Tensor f = Embed(tokens);
  for (int l = 0; l < config_.layers; ++l) {
    std::span<const Tensor> layer_graphs(stack.graphs.data() + l * stack.heads, stack.heads);
    f = ComposeLayer(f, layer_graphs, l, stack.direction);
  }
  return f;
}

std::pair<Tensor, AffinityStack> FeaturePredictor::ForwardCoupled(std::span<const int> tokens,
                                                                   Direction direction) const {
  if (config_.decoupled) throw std::logic_error("forward_features: coupled path needs decoupling disabled");
  const CoupledMaps& maps = coupled_[static_cast<int>(direction)];
  AffinityStack stack;
  stack.direction = direction;
  stack.layers = config_.layers;
  stack.heads = config_.heads;
  stack.length = tokens.size();
  Tensor f = Embed(tokens);
  for (int l = 0; l < config_.layers; ++l) {
    std::vector<Tensor> layer_graphs;
    for (int h = 0; h < config_.heads; ++h) {
      const std::size_t i = l * config_.heads + h;
      Tensor scores = AffinityScores(f, f, maps.wk[i], maps.wq[i], maps.bias);
      layer_graphs.push_back(AffinityFromScores(scores, direction, config_.sparse));
    }
    f = ComposeLayer(f, layer_graphs, l, direction);
    stack.graphs.insert(stack.graphs.end(), layer_graphs.begin(), layer_graphs.end());
  }
  return {f, std::move(stack)};
}

}  // namespace relgraph
