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

#include "relgraph/trainer.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "relgraph/checkpoint.h"
#include "relgraph/corpus.h"
#include "relgraph/errors.h"
#include "relgraph/optim.h"

namespace relgraph {
namespace {

std::string Diagnostics(const ParameterSet& params) {
  std::string worst_name;
  double worst = 0.0;
  bool non_finite = false;
  for (const Tensor& p : params.tensors()) {
    for (double v : p.values()) {
      if (!std::isfinite(v)) {
        non_finite = true;
        worst_name = p.name();
        break;
      }
      if (std::fabs(v) > worst) {
        worst = std::fabs(v);
        worst_name = p.name();
      }
    }
    if (non_finite) break;
  }
  std::ostringstream out;
  if (non_finite) {
    out << "parameter '" << worst_name << "' holds a non-finite value";
  } else {
    out << "largest |parameter| " << worst << " in '" << worst_name << "'";
  }
  return out.str();
}

}  // namespace

std::string LoadCorpus(const TrainConfig& config) {
  if (!config.synthetic.kind.empty()) return SyntheticCorpus(config.synthetic);
  if (config.corpus_path.empty()) throw ConfigError("train: set corpus_path or synthetic.kind");
  std::ifstream in(config.corpus_path, std::ios::binary);
  if (!in) throw ValidationError("train: cannot read corpus '" + config.corpus_path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

double MeanLoss(const LatentGraphModel& model, std::span<const Batch> batches) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const Batch& b : batches) {
    for (std::size_t r = 0; r < b.rows; ++r) {
      sum += TotalLoss(model, b.row(r)).loss.item();
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

TrainResult Train(const TrainConfig& config, const std::string& corpus) {
  config.Validate();
  TrainResult result;
  result.vocab = Vocab::Build(corpus, config.tokenization, static_cast<std::size_t>(config.vocab_size));
  const std::vector<int> ids = result.vocab.Encode(corpus);
  result.model = std::make_unique<LatentGraphModel>(config.Model(), config.seed);
  LatentGraphModel& model = *result.model;

  const std::size_t window = static_cast<std::size_t>(config.WindowLength());
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
  std::vector<Batch> batches = MakeBatches(ids, window, batch_size, config.seed);
  std::size_t next_batch = 0;
  std::uint64_t epoch = 0;

  Adam adam(model.params().tensors(), {config.learning_rate, config.beta1, config.beta2, config.epsilon});
  std::ofstream metrics;
  if (!config.metrics_path.empty()) {
    metrics.open(config.metrics_path, std::ios::trunc);
    if (!metrics) throw ValidationError("train: cannot open metrics file '" + config.metrics_path + "'");
  }
  const auto start = std::chrono::steady_clock::now();

  for (std::int64_t step = 1; step <= config.steps; ++step) {
    if (next_batch == batches.size()) {
      ++epoch;
      batches = MakeBatches(ids, window, batch_size, config.seed + epoch);
      next_batch = 0;
    }
    const Batch& batch = batches[next_batch++];
    adam.ZeroGrad();
    double step_loss = 0.0;
    const double inv_rows = 1.0 / static_cast<double>(batch.rows);
    for (std::size_t r = 0; r < batch.rows; ++r) {
      Tensor loss = TotalLoss(model, batch.row(r)).loss;
      const double value = loss.item();
      if (!std::isfinite(value)) {
        throw NonFiniteLossError(step, "train: non-finite loss at step " + std::to_string(step) + "; " +
                                           Diagnostics(model.params()));
      }
      step_loss += value * inv_rows;
      ReverseAccumulate(Scale(loss, inv_rows));
    }
    ClipGradNorm(model.params().tensors(), config.grad_clip);
    adam.Step();
    result.losses.push_back(step_loss);

    if (metrics.is_open()) {
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      metrics << Json{{"step", step}, {"loss", step_loss}, {"wall_ms", ms}}.dump() << '\n';
    }
    if (config.checkpoint_interval > 0 && step % config.checkpoint_interval == 0 &&
        !config.checkpoint_path.empty() && step != config.steps) {
      SaveCheckpoint(config.checkpoint_path + ".step" + std::to_string(step), config, result.vocab,
                     model.params(), step);
    }
  }
  if (!config.checkpoint_path.empty()) {
    SaveCheckpoint(config.checkpoint_path, config, result.vocab, model.params(), config.steps);
  }
  return result;
}

}  // namespace relgraph
