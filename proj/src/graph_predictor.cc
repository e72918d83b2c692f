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

#include "relgraph/graph_predictor.h"

#include <string>

#include "relgraph/errors.h"

namespace relgraph {

std::vector<std::uint8_t> CausalMask(std::size_t length, Direction direction) {
  std::vector<std::uint8_t> mask(length * length, 0);
  for (std::size_t j = 0; j < length; ++j)
    for (std::size_t t = 0; t < length; ++t) mask[j * length + t] = Allowed(j, t, direction) ? 1 : 0;
  return mask;
}

Tensor CausalMaskTensor(std::size_t length, Direction direction) {
  std::vector<double> v(length * length);
  for (std::size_t j = 0; j < length; ++j)
    for (std::size_t t = 0; t < length; ++t) v[j * length + t] = Allowed(j, t, direction) ? 1.0 : 0.0;
  return Tensor::FromData({length, length}, std::move(v));
}

Tensor AffinityScores(const Tensor& keys, const Tensor& queries, const Tensor& wk, const Tensor& wq,
                      const Tensor& bias) {
  if (keys.rank() != 2 || queries.rank() != 2 || keys.dim(0) != queries.dim(0)) {
    throw ShapeError("affinity_layer: keys " + ShapeString(keys.shape()) + " and queries " +
                     ShapeString(queries.shape()) + " must both be [T, d]");
  }
  Tensor k = MatMul(keys, wk);
  Tensor q = MatMul(queries, wq);
  return Add(MatMul(k, Transpose(q)), bias);
}

Tensor SquaredReluAffinity(const Tensor& scores, Direction direction) {
  if (scores.rank() != 2 || scores.dim(0) != scores.dim(1)) {
    throw ShapeError("affinity_layer: scores must be square, got " + ShapeString(scores.shape()));
  }
  Tensor numer = Mul(SquaredRelu(scores), CausalMaskTensor(scores.dim(0), direction));
  return NormalizeColumns(numer);
}

Tensor SoftmaxAffinity(const Tensor& scores, Direction direction) {
  if (scores.rank() != 2 || scores.dim(0) != scores.dim(1)) {
    throw ShapeError("affinity_layer: scores must be square, got " + ShapeString(scores.shape()));
  }
  return SoftmaxAxis(scores, 0, CausalMask(scores.dim(0), direction));
}

Tensor AffinityFromScores(const Tensor& scores, Direction direction, bool sparse) {
  return sparse ? SquaredReluAffinity(scores, direction) : SoftmaxAffinity(scores, direction);
}

GraphPredictor::GraphPredictor(const ModelConfig& config, Rng& rng) : config_(config) {
  config_.Validate();
  const std::size_t d = config_.graph_dim;
  const std::size_t w = config_.kernel_width;
  const std::size_t da = config_.attention_dim;
  embedding_ = params_.AddNormal("g.embed", {static_cast<std::size_t>(config_.vocab_size), d}, 0.1, rng);
  for (int s = 0; s < 2; ++s) {
    const std::string dir = s == 0 ? "g.fwd" : "g.bwd";
    Side& side = sides_[s];
    for (int i = 0; i < config_.conv_layers; ++i) {
      const std::string idx = std::to_string(i);
      side.key.weights.push_back(params_.AddUniform(dir + ".key.conv" + idx + ".w", {w * d, d}, rng));
      side.key.biases.push_back(params_.AddConstant(dir + ".key.conv" + idx + ".b", {d}, 0.0));
    }
    for (int i = 0; i < config_.conv_layers; ++i) {
      const std::string idx = std::to_string(i);
      side.query.weights.push_back(params_.AddUniform(dir + ".query.conv" + idx + ".w", {w * d, d}, rng));
      side.query.biases.push_back(params_.AddConstant(dir + ".query.conv" + idx + ".b", {d}, 0.0));
    }
    for (int l = 0; l < config_.layers; ++l) {
      for (int h = 0; h < config_.heads; ++h) {
        const std::string lh = ".l" + std::to_string(l) + ".h" + std::to_string(h);
        side.wk.push_back(params_.AddUniform(dir + ".wk" + lh, {d, da}, rng));
        side.wq.push_back(params_.AddUniform(dir + ".wq" + lh, {d, da}, rng));
      }
    }
    side.bias = params_.AddConstant(dir + ".bias", {}, config_.bias_init);
  }
}

Tensor GraphPredictor::RunStack(const ConvStack& stack, const Tensor& x, Direction direction) const {
  Tensor h = x;
  for (std::size_t i = 0; i < stack.weights.size(); ++i) {
    Tensor c = CausalConv1d(h, stack.weights[i], stack.biases[i], config_.kernel_width, direction);
    h = Add(h, Relu(c));
  }
  return h;
}

KeyQuery GraphPredictor::Encode(std::span<const int> tokens, Direction direction) const {
  if (tokens.empty()) throw ValidationError("encode_keys_queries: empty token sequence");
  Tensor x = EmbeddingLookup(embedding_, tokens);
  const Side& s = side(direction);
  return {RunStack(s.key, x, direction), RunStack(s.query, x, direction)};
}

Tensor GraphPredictor::Affinity(const KeyQuery& kq, int layer, int head, Direction direction) const {
  if (layer < 0 || layer >= config_.layers || head < 0 || head >= config_.heads) {
    throw ShapeError("affinity_layer: (layer " + std::to_string(layer) + ", head " + std::to_string(head) +
                     ") outside " + std::to_string(config_.layers) + "x" + std::to_string(config_.heads));
  }
  const Side& s = side(direction);
  const std::size_t i = layer * config_.heads + head;
  return AffinityFromScores(AffinityScores(kq.keys, kq.queries, s.wk[i], s.wq[i], s.bias), direction,
                            config_.sparse);
}

AffinityStack GraphPredictor::Predict(std::span<const int> tokens, Direction direction) const {
  KeyQuery kq = Encode(tokens, direction);
  AffinityStack stack;
  stack.direction = direction;
  stack.layers = config_.layers;
  stack.heads = config_.heads;
  stack.length = tokens.size();
  for (int l = 0; l < config_.layers; ++l)
    for (int h = 0; h < config_.heads; ++h) stack.graphs.push_back(Affinity(kq, l, h, direction));
  return stack;
}

std::pair<AffinityStack, AffinityStack> GraphPredictor::PredictGraphs(std::span<const int> tokens) const {
  return {Predict(tokens, Direction::kForward), Predict(tokens, Direction::kBackward)};
}

}  // namespace relgraph
