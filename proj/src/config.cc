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

#include "relgraph/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "relgraph/errors.h"

namespace relgraph {
namespace {

// Reads fields from a JSON object and rejects whatever was not consumed.
class StrictReader {
 public:
  StrictReader(const Json& json, std::string where) : json_(json), where_(std::move(where)) {
    if (!json_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
  }

  template <typename T>
  void Read(const char* key, T& out) {
    seen_.insert(key);
    auto it = json_.find(key);
    if (it == json_.end()) return;
    try {
      out = it->get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(where_ + ": field '" + key + "' has the wrong type: " + e.what());
    }
  }

  const Json* Object(const char* key) {
    seen_.insert(key);
    auto it = json_.find(key);
    return it == json_.end() ? nullptr : &*it;
  }

  void Finish() const {
    for (auto it = json_.begin(); it != json_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }
  }

 private:
  const Json& json_;
  std::string where_;
  std::set<std::string> seen_;
};

void RequirePositive(const char* name, double value) {
  if (!(value > 0)) throw ConfigError(std::string("config: ") + name + " must be positive");
}

Composition ParseComposition(const std::string& name) {
  if (name == "gru") return Composition::kGru;
  if (name == "linear_residual") return Composition::kLinearResidual;
  throw ConfigError("config: composition must be 'gru' or 'linear_residual', got '" + name + "'");
}

const char* CompositionName(Composition c) {
  return c == Composition::kGru ? "gru" : "linear_residual";
}

}  // namespace

const char* TokenModeName(TokenMode mode) { return mode == TokenMode::kChar ? "char" : "word"; }

TokenMode ParseTokenMode(const std::string& name) {
  if (name == "char") return TokenMode::kChar;
  if (name == "word" || name == "whitespace-word") return TokenMode::kWord;
  throw ConfigError("config: tokenization must be 'char' or 'word', got '" + name + "'");
}

void ModelConfig::Validate() const {
  if (vocab_size < 3) throw ConfigError("config: vocab_size must be at least 3");
  RequirePositive("graph_dim", graph_dim);
  RequirePositive("attention_dim", attention_dim);
  RequirePositive("feature_dim", feature_dim);
  RequirePositive("decoder_dim", decoder_dim);
  if (conv_layers < 0) throw ConfigError("config: conv_layers must be nonnegative");
  RequirePositive("kernel_width", kernel_width);
  if (layers < 0) throw ConfigError("config: layers must be nonnegative");
  RequirePositive("heads", heads);
  RequirePositive("context_length", context_length);
}

void TrainConfig::Validate() const {
  RequirePositive("seq_len", seq_len);
  RequirePositive("batch_size", batch_size);
  RequirePositive("learning_rate", learning_rate);
  RequirePositive("epsilon", epsilon);
  RequirePositive("grad_clip", grad_clip);
  if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) {
    throw ConfigError("config: beta1 and beta2 must lie in [0, 1)");
  }
  if (steps < 0) throw ConfigError("config: steps must be nonnegative");
  if (checkpoint_interval < 0) throw ConfigError("config: checkpoint_interval must be nonnegative");
  if (seq_len < 2) throw ConfigError("config: seq_len must be at least 2");
  if (layers < 1) throw ConfigError("config: layers must be at least 1 for pretraining");
  ParseComposition(composition);
  if (!synthetic.kind.empty()) {
    if (synthetic.kind != "periodic" && synthetic.kind != "uniform" && synthetic.kind != "pointer") {
      throw ConfigError("config: synthetic.kind must be periodic, uniform or pointer");
    }
    if (synthetic.length <= 0) throw ConfigError("config: synthetic.length must be positive");
  }
  Model().Validate();
}

ModelConfig TrainConfig::Model() const {
  ModelConfig m;
  m.vocab_size = vocab_size;
  m.graph_dim = graph_dim;
  m.attention_dim = attention_dim;
  m.feature_dim = feature_dim;
  m.decoder_dim = decoder_dim > 0 ? decoder_dim : feature_dim;
  m.conv_layers = conv_layers;
  m.kernel_width = kernel_width;
  m.layers = ablation.hierarchical_off ? 1 : layers;
  m.heads = heads;
  m.context_length = ablation.sequence_d1 ? 1 : context_length;
  m.bias_init = bias_init;
  m.composition = ParseComposition(composition);
  m.sparse = !ablation.sparse_off;
  m.decoupled = !ablation.decouple_off;
  m.unit_level = !ablation.unit_level_off;
  return m;
}

int TrainConfig::WindowLength() const {
  const ModelConfig m = Model();
  return m.unit_level ? seq_len : seq_len + 2 * m.context_length;
}

Json ToJson(const TrainConfig& c) {
  Json j;
  j["tokenization"] = TokenModeName(c.tokenization);
  j["seq_len"] = c.seq_len;
  j["batch_size"] = c.batch_size;
  j["context_length"] = c.context_length;
  j["layers"] = c.layers;
  j["heads"] = c.heads;
  j["graph_dim"] = c.graph_dim;
  j["attention_dim"] = c.attention_dim;
  j["feature_dim"] = c.feature_dim;
  j["decoder_dim"] = c.decoder_dim;
  j["conv_layers"] = c.conv_layers;
  j["kernel_width"] = c.kernel_width;
  j["vocab_size"] = c.vocab_size;
  j["bias_init"] = c.bias_init;
  j["composition"] = c.composition;
  j["learning_rate"] = c.learning_rate;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["epsilon"] = c.epsilon;
  j["grad_clip"] = c.grad_clip;
  j["steps"] = c.steps;
  j["seed"] = c.seed;
  j["decouple_off"] = c.ablation.decouple_off;
  j["sparse_off"] = c.ablation.sparse_off;
  j["hierarchical_off"] = c.ablation.hierarchical_off;
  j["unit_level_off"] = c.ablation.unit_level_off;
  j["sequence_D1"] = c.ablation.sequence_d1;
  j["checkpoint_interval"] = c.checkpoint_interval;
  j["corpus_path"] = c.corpus_path;
  j["synthetic"] = {{"kind", c.synthetic.kind},
                    {"length", c.synthetic.length},
                    {"period", c.synthetic.period},
                    {"alphabet", c.synthetic.alphabet},
                    {"queries", c.synthetic.queries},
                    {"pointer_length", c.synthetic.pointer_length},
                    {"seed", c.synthetic.seed}};
  j["checkpoint_path"] = c.checkpoint_path;
  j["metrics_path"] = c.metrics_path;
  return j;
}

TrainConfig TrainConfigFromJson(const Json& json) {
  TrainConfig c;
  StrictReader r(json, "train config");
  std::string tokenization = TokenModeName(c.tokenization);
  r.Read("tokenization", tokenization);
  c.tokenization = ParseTokenMode(tokenization);
  r.Read("seq_len", c.seq_len);
  r.Read("batch_size", c.batch_size);
  r.Read("context_length", c.context_length);
  r.Read("layers", c.layers);
  r.Read("heads", c.heads);
  r.Read("graph_dim", c.graph_dim);
  r.Read("attention_dim", c.attention_dim);
  r.Read("feature_dim", c.feature_dim);
  r.Read("decoder_dim", c.decoder_dim);
  r.Read("conv_layers", c.conv_layers);
  r.Read("kernel_width", c.kernel_width);
  r.Read("vocab_size", c.vocab_size);
  r.Read("bias_init", c.bias_init);
  r.Read("composition", c.composition);
  r.Read("learning_rate", c.learning_rate);
  r.Read("beta1", c.beta1);
  r.Read("beta2", c.beta2);
  r.Read("epsilon", c.epsilon);
  r.Read("grad_clip", c.grad_clip);
  r.Read("steps", c.steps);
  r.Read("seed", c.seed);
  r.Read("decouple_off", c.ablation.decouple_off);
  r.Read("sparse_off", c.ablation.sparse_off);
  r.Read("hierarchical_off", c.ablation.hierarchical_off);
  r.Read("unit_level_off", c.ablation.unit_level_off);
  r.Read("sequence_D1", c.ablation.sequence_d1);
  r.Read("checkpoint_interval", c.checkpoint_interval);
  r.Read("corpus_path", c.corpus_path);
  if (const Json* s = r.Object("synthetic")) {
    StrictReader sr(*s, "train config.synthetic");
    sr.Read("kind", c.synthetic.kind);
    sr.Read("length", c.synthetic.length);
    sr.Read("period", c.synthetic.period);
    sr.Read("alphabet", c.synthetic.alphabet);
    sr.Read("queries", c.synthetic.queries);
    sr.Read("pointer_length", c.synthetic.pointer_length);
    sr.Read("seed", c.synthetic.seed);
    sr.Finish();
  }
  r.Read("checkpoint_path", c.checkpoint_path);
  r.Read("metrics_path", c.metrics_path);
  r.Finish();
  c.Validate();
  return c;
}

Json ToJson(const ModelConfig& m) {
  return {{"vocab_size", m.vocab_size},     {"graph_dim", m.graph_dim},
          {"attention_dim", m.attention_dim}, {"feature_dim", m.feature_dim},
          {"decoder_dim", m.decoder_dim},   {"conv_layers", m.conv_layers},
          {"kernel_width", m.kernel_width}, {"layers", m.layers},
          {"heads", m.heads},               {"context_length", m.context_length},
          {"bias_init", m.bias_init},       {"composition", CompositionName(m.composition)},
          {"sparse", m.sparse},             {"decoupled", m.decoupled},
          {"unit_level", m.unit_level}};
}

ModelConfig ModelConfigFromJson(const Json& json) {
  ModelConfig m;
  StrictReader r(json, "model config");
  r.Read("vocab_size", m.vocab_size);
  r.Read("graph_dim", m.graph_dim);
  r.Read("attention_dim", m.attention_dim);
  r.Read("feature_dim", m.feature_dim);
  r.Read("decoder_dim", m.decoder_dim);
  r.Read("conv_layers", m.conv_layers);
  r.Read("kernel_width", m.kernel_width);
  r.Read("layers", m.layers);
  r.Read("heads", m.heads);
  r.Read("context_length", m.context_length);
  r.Read("bias_init", m.bias_init);
  std::string composition = CompositionName(m.composition);
  r.Read("composition", composition);
  m.composition = ParseComposition(composition);
  r.Read("sparse", m.sparse);
  r.Read("decoupled", m.decoupled);
  r.Read("unit_level", m.unit_level);
  r.Finish();
  m.Validate();
  return m;
}

void ApplyOverrides(Json& json, const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + a + "' is not of the form key=value");
    }
    const std::string key = a.substr(0, eq);
    const std::string raw = a.substr(eq + 1);
    Json value = Json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;
    Json* target = &json;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (dot == std::string::npos) {
        (*target)[part] = value;
        break;
      }
      if (!target->contains(part) || !(*target)[part].is_object()) (*target)[part] = Json::object();
      target = &(*target)[part];
      start = dot + 1;
    }
  }
}

Json LoadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json j = Json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  return j;
}

}  // namespace relgraph
