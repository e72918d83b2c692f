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

#ifndef RELGRAPH_CONFIG_H_
#define RELGRAPH_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace relgraph {

using Json = nlohmann::json;

enum class TokenMode { kChar, kWord };
enum class Composition { kGru, kLinearResidual };

const char* TokenModeName(TokenMode mode);
TokenMode ParseTokenMode(const std::string& name);

// Switches that each disable one property of the pretraining setup.
struct AblationFlags {
  bool decouple_off = false;      // graphs computed from f's own features
  bool sparse_off = false;        // softmax instead of squared-ReLU normalization
  bool hierarchical_off = false;  // a single graph layer
  bool unit_level_off = false;    // one sequence-level objective
  bool sequence_d1 = false;       // context length 1

  bool operator==(const AblationFlags&) const = default;
};

// Architecture of the pretraining model after ablations are applied.
struct ModelConfig {
  int vocab_size = 64;
  int graph_dim = 128;      // d_g: key/query CNN channels
  int attention_dim = 64;   // d_a: projected key/query width
  int feature_dim = 128;    // d_f
  int decoder_dim = 128;    // d_dec
  int conv_layers = 2;
  int kernel_width = 3;
  int layers = 2;   // L
  int heads = 4;    // n_h
  int context_length = 3;  // D
  double bias_init = 1.0;
  Composition composition = Composition::kGru;
  bool sparse = true;     // squared-ReLU affinities (false: softmax)
  bool decoupled = true;  // separate graph network (false: graphs from f)
  bool unit_level = true; // per-position objective (false: sequence-level)

  void Validate() const;
};

struct SyntheticCorpusSpec {
  std::string kind;  // "periodic", "uniform", "pointer"; empty when unused
  std::int64_t length = 0;
  int period = 7;
  int alphabet = 16;
  int queries = 3;  // pointer corpus: (pointer, value) bigrams per episode
  int pointer_length = 24;  // pointer corpus: task length before the queries
  std::uint64_t seed = 1;
};

struct TrainConfig {
  TokenMode tokenization = TokenMode::kChar;
  int seq_len = 32;
  int batch_size = 16;
  int context_length = 3;
  int layers = 2;
  int heads = 4;
  int graph_dim = 128;
  int attention_dim = 64;
  int feature_dim = 128;
  int decoder_dim = 0;  // 0: same as feature_dim
  int conv_layers = 2;
  int kernel_width = 3;
  int vocab_size = 64;  // includes the two reserved ids
  double bias_init = 1.0;
  std::string composition = "gru";
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double grad_clip = 5.0;
  std::int64_t steps = 1000;
  std::uint64_t seed = 1;
  AblationFlags ablation;
  std::int64_t checkpoint_interval = 0;  // 0: final checkpoint only
  std::string corpus_path;
  SyntheticCorpusSpec synthetic;
  std::string checkpoint_path;
  std::string metrics_path;

  void Validate() const;
  ModelConfig Model() const;
  // Window length fed to the objective (longer for the sequence-level one).
  int WindowLength() const;
};

// JSON mapping. Every field is addressable by its name; unknown keys throw
// ConfigError.
Json ToJson(const TrainConfig& config);
TrainConfig TrainConfigFromJson(const Json& json);
Json ToJson(const ModelConfig& config);
ModelConfig ModelConfigFromJson(const Json& json);

// Applies "key=value" overrides; values parse as JSON when possible and fall
// back to plain strings. Nested keys use dots ("synthetic.kind=pointer").
void ApplyOverrides(Json& json, const std::vector<std::string>& assignments);

Json LoadJsonFile(const std::string& path);

}  // namespace relgraph

#endif  // RELGRAPH_CONFIG_H_
