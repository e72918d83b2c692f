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

#include "relgraph/context_objective.h"

#include <algorithm>

#include "relgraph/errors.h"
#include "relgraph/ops.h"

namespace relgraph {
namespace {

std::optional<GraphPredictor> MaybeGraph(const ModelConfig& config, Rng& rng) {
  if (!config.decoupled) return std::nullopt;
  return std::optional<GraphPredictor>(std::in_place, config, rng);
}

// Targets for every position of a sequence in one direction.
std::vector<std::vector<int>> ContextWindows(std::span<const int> tokens, int context, Direction direction) {
  const long n = static_cast<long>(tokens.size());
  std::vector<std::vector<int>> windows(tokens.size());
  for (long t = 0; t < n; ++t) {
    for (long k = 1; k <= context; ++k) {
      const long s = direction == Direction::kForward ? t + k : t - k;
      if (s < 0 || s >= n) break;
      windows[t].push_back(tokens[s]);
    }
  }
  return windows;
}

}  // namespace

ContextDecoder::ContextDecoder(const ModelConfig& config, const std::string& prefix, ParameterSet& params,
                               Rng& rng) {
  const std::size_t df = config.feature_dim;
  const std::size_t dd = config.decoder_dim;
  init_ = Linear::Create(params, prefix + ".init", df, dd, rng);
  cell_ = GruCell::Create(params, prefix + ".cell", df, dd, rng);
  output_ = Linear::Create(params, prefix + ".out", dd, static_cast<std::size_t>(config.vocab_size), rng);
}

Tensor ContextDecoder::WindowNll(const Tensor& features, std::span<const int> first_inputs,
                                 const std::vector<std::vector<int>>& targets, const Tensor& embedding) const {
  const std::size_t rows = features.dim(0);
  if (first_inputs.size() != rows || targets.size() != rows) {
    throw ShapeError("position_nll: " + std::to_string(rows) + " feature rows with " +
                     std::to_string(first_inputs.size()) + " inputs and " + std::to_string(targets.size()) +
                     " windows");
  }
  std::size_t steps = 0;
  for (const auto& w : targets) steps = std::max(steps, w.size());
  Tensor total = Tensor::Zeros({rows});
  if (steps == 0) return total;

  Tensor state = Tanh(init_(features));
  std::vector<int> inputs(first_inputs.begin(), first_inputs.end());
  std::vector<int> goal(rows);
  std::vector<double> weight(rows);
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t n = 0; n < rows; ++n) {
      const bool live = k < targets[n].size();
      goal[n] = live ? targets[n][k] : 0;
      weight[n] = live ? 1.0 : 0.0;
    }
    state = cell_(EmbeddingLookup(embedding, inputs), state);
    Tensor nll = CrossEntropyRows(output_(state), goal, weight);
    total = k == 0 ? nll : Add(total, nll);
    for (std::size_t n = 0; n < rows; ++n) inputs[n] = goal[n];
  }
  return total;
}

Tensor ContextDecoder::PositionNll(const Tensor& feature, int current, std::span<const int> window,
                                   const Tensor& embedding) const {
  if (window.empty()) return Tensor::Scalar(0.0);
  if (feature.rank() != 2 || feature.dim(0) != 1) {
    throw ShapeError("position_nll: feature must be shaped [1, d_f], got " + ShapeString(feature.shape()));
  }
  const int first[] = {current};
  std::vector<std::vector<int>> targets{std::vector<int>(window.begin(), window.end())};
  return SumAll(WindowNll(feature, first, targets, embedding));
}

LatentGraphModel::LatentGraphModel(const ModelConfig& config, std::uint64_t seed)
    : config_(config),
      init_rng_(seed),
      graph_(MaybeGraph(config, init_rng_)),
      features_(config, init_rng_) {
  if (graph_) params_.Append(graph_->params());
  params_.Append(features_.params());
  ParameterSet decoder_params;
  decoders_[0] = ContextDecoder(config_, "dec.fwd", decoder_params, init_rng_);
  decoders_[1] = ContextDecoder(config_, "dec.bwd", decoder_params, init_rng_);
  params_.Append(decoder_params);
}

ParameterSet LatentGraphModel::GraphParams() const {
  ParameterSet out;
  out.Append(graph_ ? graph_->params() : features_.params());
  return out;
}

AffinityStack LatentGraphModel::ExtractGraphs(std::span<const int> tokens, Direction direction) const {
  if (graph_) return graph_->Predict(tokens, direction);
  return features_.ForwardCoupled(tokens, direction).second;
}

Tensor LatentGraphModel::ForwardFeatures(std::span<const int> tokens, Direction direction,
                                         AffinityStack* graphs_out) const {
  if (graph_) {
    AffinityStack stack = graph_->Predict(tokens, direction);
    Tensor f = features_.Forward(tokens, stack);
    if (graphs_out) *graphs_out = std::move(stack);
    return f;
  }
  auto [f, stack] = features_.ForwardCoupled(tokens, direction);
  if (graphs_out) *graphs_out = std::move(stack);
  return f;
}

ObjectiveValue TotalLoss(const LatentGraphModel& model, std::span<const int> tokens) {
  if (!model.config().unit_level) return SequenceLevelLoss(model, tokens);
  if (tokens.size() < 2) {
    throw ValidationError("total_loss: sequence of length " + std::to_string(tokens.size()) +
                          " has no context to predict (need T >= 2)");
  }
  const int context = model.config().context_length;
  const Tensor& embedding = model.features().embedding();
  Tensor sum;
  std::size_t count = 0;
  for (Direction dir : {Direction::kForward, Direction::kBackward}) {
    Tensor f = model.ForwardFeatures(tokens, dir);
    auto windows = ContextWindows(tokens, context, dir);
    for (const auto& w : windows) count += w.size();
    Tensor part = SumAll(model.decoder(dir).WindowNll(f, tokens, windows, embedding));
    sum = sum.defined() ? Add(sum, part) : part;
  }
  return {Scale(sum, 1.0 / static_cast<double>(count)), count};
}

std::vector<double> PositionLosses(const LatentGraphModel& model, std::span<const int> tokens,
                                   Direction direction) {
  Tensor f = model.ForwardFeatures(tokens, direction);
  auto windows = ContextWindows(tokens, model.config().context_length, direction);
  Tensor nll = model.decoder(direction).WindowNll(f, tokens, windows, model.features().embedding());
  return std::vector<double>(nll.values().begin(), nll.values().end());
}

ObjectiveValue SequenceLevelLoss(const LatentGraphModel& model, std::span<const int> tokens) {
  const std::size_t context = model.config().context_length;
  if (tokens.size() < 2 * context + 1) {
    throw ValidationError("sequence_loss: need at least " + std::to_string(2 * context + 1) +
                          " tokens (context, window, context), got " + std::to_string(tokens.size()));
  }
  std::span<const int> window = tokens.subspan(context, tokens.size() - 2 * context);
  const Tensor& embedding = model.features().embedding();
  Tensor sum;
  for (Direction dir : {Direction::kForward, Direction::kBackward}) {
    Tensor f = model.ForwardFeatures(window, dir);
    Tensor pooled = Scale(SumAxis(f, 0), 1.0 / static_cast<double>(window.size()));
    std::vector<int> targets;
    int first;
    if (dir == Direction::kForward) {
      first = window.back();
      targets.assign(tokens.end() - context, tokens.end());
    } else {
      first = window.front();
      for (std::size_t k = 0; k < context; ++k) targets.push_back(tokens[context - 1 - k]);
    }
    Tensor part = model.decoder(dir).PositionNll(pooled, first, targets, embedding);
    sum = sum.defined() ? Add(sum, part) : part;
  }
  return {Scale(sum, 1.0 / static_cast<double>(2 * context)), 2 * context};
}

}  // namespace relgraph
