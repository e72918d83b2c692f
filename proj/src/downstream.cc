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

#include "relgraph/downstream.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "relgraph/errors.h"
#include "relgraph/ops.h"
#include "relgraph/optim.h"

namespace relgraph {
namespace {

constexpr std::size_t kEvalBatch = 64;

template <typename T>
void ReadField(const Json& json, const char* key, T& field) {
  if (json.contains(key)) field = json.at(key).get<T>();
}

double SampleStddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::vector<RawExample> PointerExamples(const std::vector<LabeledText>& texts) {
  std::vector<RawExample> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back({t.text, std::to_string(t.label)});
  return out;
}

Vocab TaskVocab(const std::vector<RawExample>& train, TokenMode mode) {
  std::string corpus;
  for (const auto& ex : train) {
    if (mode == TokenMode::kWord && !corpus.empty()) corpus.push_back(' ');
    corpus += ex.text;
  }
  return Vocab::Build(corpus, mode, std::size_t{1} << 20);
}

}  // namespace

GraphMode ParseGraphMode(const std::string& name) {
  if (name == "glomo" || name == "learned") return GraphMode::kLearned;
  if (name == "uniform") return GraphMode::kUniform;
  if (name == "none") return GraphMode::kNone;
  throw ConfigError("downstream: graph_mode must be glomo, uniform or none, got '" + name + "'");
}

const char* GraphModeName(GraphMode mode) {
  switch (mode) {
    case GraphMode::kLearned: return "glomo";
    case GraphMode::kUniform: return "uniform";
    case GraphMode::kNone: return "none";
  }
  return "?";
}

FusionSite ParseFusionSite(const std::string& name) {
  if (name == "embeddings") return FusionSite::kEmbeddings;
  if (name == "rnn-states") return FusionSite::kRnnStates;
  throw ConfigError("downstream: site must be embeddings or rnn-states, got '" + name + "'");
}

const char* FusionSiteName(FusionSite site) {
  return site == FusionSite::kEmbeddings ? "embeddings" : "rnn-states";
}

void DownstreamConfig::Validate() const {
  if (task != "synthetic-pointer" && task != "csv") {
    throw ConfigError("downstream: task must be synthetic-pointer or csv, got '" + task + "'");
  }
  if (task == "synthetic-pointer") {
    pointer.Validate();
    if (train_size == 0 || test_size == 0) throw ConfigError("downstream: train_size and test_size must be positive");
  } else if (train_csv.empty() || test_csv.empty()) {
    throw ConfigError("downstream: the csv task needs train_csv and test_csv");
  }
  if (embedding_dim < 1) throw ConfigError("downstream: embedding_dim must be positive");
  ParseFusionSite(site);
  ParseGraphMode(graph_mode);
  if (layers < 0 || heads < 0) throw ConfigError("downstream: layers and heads must be nonnegative");
  if (seeds.empty()) throw ConfigError("downstream: seeds must not be empty");
  if (epochs < 1 || batch_size < 1) throw ConfigError("downstream: epochs and batch_size must be positive");
  if (!(learning_rate > 0) || !(grad_clip > 0)) {
    throw ConfigError("downstream: learning_rate and grad_clip must be positive");
  }
}

Json ToJson(const DownstreamConfig& c) {
  return {{"task", c.task},
          {"pointer", c.pointer.ToJson()},
          {"train_size", c.train_size},
          {"test_size", c.test_size},
          {"data_seed", c.data_seed},
          {"train_csv", c.train_csv},
          {"test_csv", c.test_csv},
          {"embedding_dim", c.embedding_dim},
          {"site", c.site},
          {"graph_mode", c.graph_mode},
          {"ablation",
           {{"decouple_off", c.ablation.decouple_off},
            {"sparse_off", c.ablation.sparse_off},
            {"hierarchical_off", c.ablation.hierarchical_off},
            {"unit_level_off", c.ablation.unit_level_off},
            {"sequence_D1", c.ablation.sequence_d1}}},
          {"layers", c.layers},
          {"heads", c.heads},
          {"allow_unknown_tokens", c.allow_unknown_tokens},
          {"seeds", c.seeds},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"grad_clip", c.grad_clip},
          {"checkpoint_path", c.checkpoint_path},
          {"report_path", c.report_path}};
}

DownstreamConfig DownstreamConfigFromJson(const Json& json) {
  static const std::set<std::string> kKeys = {
      "task",        "pointer", "train_size", "test_size", "data_seed", "train_csv",
      "test_csv",    "embedding_dim", "site", "graph_mode", "ablation", "layers",
      "heads",       "allow_unknown_tokens", "seeds", "epochs", "batch_size", "learning_rate",
      "grad_clip",   "checkpoint_path", "report_path"};
  if (!json.is_object()) throw ConfigError("downstream config: expected a JSON object");
  for (auto it = json.begin(); it != json.end(); ++it) {
    if (!kKeys.count(it.key())) throw ConfigError("downstream config: unknown key '" + it.key() + "'");
  }
  DownstreamConfig c;
  try {
    ReadField(json, "task", c.task);
    if (json.contains("pointer")) c.pointer = PointerTaskSpec::FromJson(json.at("pointer"));
    ReadField(json, "train_size", c.train_size);
    ReadField(json, "test_size", c.test_size);
    ReadField(json, "data_seed", c.data_seed);
    ReadField(json, "train_csv", c.train_csv);
    ReadField(json, "test_csv", c.test_csv);
    ReadField(json, "embedding_dim", c.embedding_dim);
    ReadField(json, "site", c.site);
    ReadField(json, "graph_mode", c.graph_mode);
    if (json.contains("ablation")) {
      const Json& a = json.at("ablation");
      static const std::set<std::string> kFlags = {"decouple_off", "sparse_off", "hierarchical_off",
                                                   "unit_level_off", "sequence_D1"};
      for (auto it = a.begin(); it != a.end(); ++it) {
        if (!kFlags.count(it.key())) throw ConfigError("downstream config: unknown ablation flag '" + it.key() + "'");
      }
      ReadField(a, "decouple_off", c.ablation.decouple_off);
      ReadField(a, "sparse_off", c.ablation.sparse_off);
      ReadField(a, "hierarchical_off", c.ablation.hierarchical_off);
      ReadField(a, "unit_level_off", c.ablation.unit_level_off);
      ReadField(a, "sequence_D1", c.ablation.sequence_d1);
    }
    ReadField(json, "layers", c.layers);
    ReadField(json, "heads", c.heads);
    ReadField(json, "allow_unknown_tokens", c.allow_unknown_tokens);
    ReadField(json, "seeds", c.seeds);
    ReadField(json, "epochs", c.epochs);
    ReadField(json, "batch_size", c.batch_size);
    ReadField(json, "learning_rate", c.learning_rate);
    ReadField(json, "grad_clip", c.grad_clip);
    ReadField(json, "checkpoint_path", c.checkpoint_path);
    ReadField(json, "report_path", c.report_path);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("downstream config: ") + e.what());
  }
  c.Validate();
  return c;
}

std::vector<RawExample> ReadLabeledCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("csv: cannot read '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (quoted) throw ValidationError("csv: '" + path + "' ends inside a quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("csv: '" + path + "' is empty (a text,label header is required)");

  const auto& header = rows[0];
  auto text_col = std::find(header.begin(), header.end(), "text");
  auto label_col = std::find(header.begin(), header.end(), "label");
  if (text_col == header.end() || label_col == header.end()) {
    throw ValidationError("csv: '" + path + "' header must name text and label columns");
  }
  const std::size_t ti = text_col - header.begin();
  const std::size_t li = label_col - header.begin();
  std::vector<RawExample> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw ValidationError("csv: '" + path + "' line " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " fields, header has " + std::to_string(header.size()));
    }
    out.push_back({rows[r][ti], rows[r][li]});
  }
  return out;
}

TaskData EncodeTask(const std::vector<RawExample>& train, const std::vector<RawExample>& test, Vocab vocab,
                    bool allow_unknown) {
  TaskData data;
  std::set<std::string> labels;
  for (const auto& ex : train) labels.insert(ex.label);
  data.labels.assign(labels.begin(), labels.end());
  std::map<std::string, int> label_ids;
  for (std::size_t i = 0; i < data.labels.size(); ++i) label_ids[data.labels[i]] = static_cast<int>(i);

  std::size_t unknown = 0;
  std::size_t total = 0;
  std::string first_unknown;
  auto encode = [&](const std::vector<RawExample>& src, std::vector<Example>& dst, const char* split) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      Example ex;
      ex.ids = vocab.Encode(src[i].text);
      if (ex.ids.empty()) {
        throw ValidationError(std::string("task: ") + split + " example " + std::to_string(i) + " has no tokens");
      }
      for (std::size_t k = 0; k < ex.ids.size(); ++k) {
        if (ex.ids[k] == Vocab::kUnknownId) {
          if (first_unknown.empty()) first_unknown = Tokenize(src[i].text, vocab.mode())[k];
          ++unknown;
        }
      }
      total += ex.ids.size();
      auto it = label_ids.find(src[i].label);
      if (it == label_ids.end()) {
        throw ValidationError(std::string("task: ") + split + " label '" + src[i].label +
                              "' never appears in the training split");
      }
      ex.label = it->second;
      dst.push_back(std::move(ex));
    }
  };
  encode(train, data.train, "train");
  encode(test, data.test, "test");
  if (unknown > 0 && !allow_unknown) {
    throw ValidationError("task: " + std::to_string(unknown) + " of " + std::to_string(total) +
                          " tokens (first: '" + first_unknown +
                          "') are missing from the checkpoint vocabulary; retokenize with the checkpoint vocab "
                          "mapping unknown tokens to id 1 by setting allow_unknown_tokens=true, or pretrain on "
                          "text covering the task");
  }
  data.vocab = std::move(vocab);
  return data;
}

PretrainedGraphs::PretrainedGraphs(const Checkpoint& checkpoint) : vocab_(checkpoint.vocab) {
  const TrainConfig& config = checkpoint.config;
  model_ = std::make_unique<LatentGraphModel>(config.Model(), config.seed);
  RestoreParameters(checkpoint, model_->params());
  model_->params().SetRequiresGrad(false);
}

AffinityStack PretrainedGraphs::Extract(std::span<const int> ids, Direction direction) const {
  return model_->ExtractGraphs(ids, direction);
}

const std::pair<AffinityStack, AffinityStack>& PretrainedGraphs::Levels(std::span<const int> ids,
                                                                      Direction direction) const {
  auto key = std::make_pair(std::vector<int>(ids.begin(), ids.end()), static_cast<int>(direction));
  auto it = levels_.find(key);
  if (it == levels_.end()) {
    AffinityStack g = Extract(ids, direction);
    AffinityStack lambda = CumulativeProducts(g);
    it = levels_.emplace(std::move(key), std::make_pair(std::move(g), std::move(lambda))).first;
  }
  return it->second;
}

std::vector<double> PretrainedGraphs::Snapshot() const {
  std::vector<double> out;
  const ParameterSet params = model_->GraphParams();
  for (const Tensor& t : params.tensors()) out.insert(out.end(), t.values().begin(), t.values().end());
  return out;
}

TransferClassifier::TransferClassifier(std::size_t vocab_size, std::size_t classes, std::size_t width,
                                       GraphMode mode, FusionSite site, int layers, int heads, std::uint64_t seed)
    : mode_(mode), site_(site), width_(width) {
  Rng rng(seed);
  embedding_ = params_.AddNormal("clf.embed", {vocab_size, width}, 0.1, rng);
  const bool fused = mode_ != GraphMode::kNone;
  if (mode_ == GraphMode::kLearned) mixture_ = MixtureSpec::Create(params_, "clf.mix", layers, heads);
  if (fused) fusion_ = FusionParams::Create(params_, "clf.fuse", width, rng);
  const std::size_t rnn_in = fused && site_ == FusionSite::kEmbeddings ? 2 * width : width;
  const std::size_t att = fused && site_ == FusionSite::kRnnStates ? 2 * width : width;
  rnn_ = GruCell::Create(params_, "clf.rnn", rnn_in, width, rng);
  query_ = Linear::Create(params_, "clf.att.q", att, att, rng);
  key_ = Linear::Create(params_, "clf.att.k", att, att, rng);
  value_ = Linear::Create(params_, "clf.att.v", att, att, rng);
  head_ = Linear::Create(params_, "clf.head", att, classes, rng);
}

std::pair<Tensor, Tensor> TransferClassifier::Graphs(std::span<const int> ids, const PretrainedGraphs* graphs) const {
  if (mode_ == GraphMode::kUniform) {
    return {UniformGraph(ids.size(), Direction::kForward), UniformGraph(ids.size(), Direction::kBackward)};
  }
  if (!graphs) throw std::logic_error("transfer: learned graphs requested without a checkpoint");
  Tensor mixed[2];
  for (Direction dir : {Direction::kForward, Direction::kBackward}) {
    const auto& [g, lambda] = graphs->Levels(ids, dir);
    mixed[static_cast<int>(dir)] = MixGraphs(g, lambda, mixture_.logits(dir));
  }
  return {mixed[0], mixed[1]};
}

Tensor TransferClassifier::Attend(const Tensor& h) const {
  const double scale = 1.0 / std::sqrt(static_cast<double>(h.dim(1)));
  Tensor scores = Scale(MatMul(query_(h), Transpose(key_(h))), scale);
  return Add(h, MatMul(SoftmaxAxis(scores, 1), value_(h)));
}

Tensor TransferClassifier::Logits(const std::vector<std::span<const int>>& batch,
                                  const PretrainedGraphs* graphs) const {
  if (batch.empty()) throw ShapeError("classifier: empty batch");
  const std::size_t rows = batch.size();
  const std::size_t n = batch[0].size();
  for (const auto& ids : batch) {
    if (ids.size() != n) throw ShapeError("classifier: sequences in one batch must share a length");
  }
  if (n == 0) throw ShapeError("classifier: empty sequence");
  const bool fused = mode_ != GraphMode::kNone;

  // Time-major layout (row t * rows + b) lets the recurrence run on whole
  // batches; per-sequence steps gather their rows back out.
  std::vector<int> time_major(n * rows);
  for (std::size_t b = 0; b < rows; ++b) {
    for (std::size_t t = 0; t < n; ++t) time_major[t * rows + b] = batch[b][t];
  }
  std::vector<std::vector<int>> own_rows(rows, std::vector<int>(n));
  std::vector<int> to_time_major(n * rows);
  for (std::size_t b = 0; b < rows; ++b) {
    for (std::size_t t = 0; t < n; ++t) {
      own_rows[b][t] = static_cast<int>(t * rows + b);
      to_time_major[t * rows + b] = static_cast<int>(b * n + t);
    }
  }
  std::vector<std::pair<Tensor, Tensor>> mixes;
  if (fused) {
    for (const auto& ids : batch) mixes.push_back(Graphs(ids, graphs));
  }

  Tensor x = EmbeddingLookup(embedding_, time_major);
  if (fused && site_ == FusionSite::kEmbeddings) {
    std::vector<Tensor> parts;
    for (std::size_t b = 0; b < rows; ++b) {
      parts.push_back(Fuse(EmbeddingLookup(x, own_rows[b]), mixes[b].first, mixes[b].second, fusion_));
    }
    x = EmbeddingLookup(Concat(parts, 0), to_time_major);
  }

  std::vector<Tensor> states;
  states.reserve(n);
  Tensor h = Tensor::Zeros({rows, width_});
  for (std::size_t t = 0; t < n; ++t) {
    h = rnn_(Slice(x, 0, t * rows, (t + 1) * rows), h);
    states.push_back(h);
  }
  Tensor hs = Concat(states, 0);

  std::vector<Tensor> pooled;
  pooled.reserve(rows);
  for (std::size_t b = 0; b < rows; ++b) {
    Tensor hb = EmbeddingLookup(hs, own_rows[b]);
    if (fused && site_ == FusionSite::kRnnStates) hb = Fuse(hb, mixes[b].first, mixes[b].second, fusion_);
    pooled.push_back(Scale(SumAxis(Attend(hb), 0), 1.0 / static_cast<double>(n)));
  }
  return head_(Concat(pooled, 0));
}

Tensor TransferClassifier::Logits(std::span<const int> ids, const PretrainedGraphs* graphs) const {
  return Logits(std::vector<std::span<const int>>{ids}, graphs);
}

std::vector<int> TransferClassifier::Predict(const std::vector<std::span<const int>>& batch,
                                             const PretrainedGraphs* graphs) const {
  Tensor logits = Logits(batch, graphs);
  const std::size_t classes = logits.dim(1);
  auto v = logits.values();
  std::vector<int> out(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    auto row = v.subspan(b * classes, classes);
    out[b] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

namespace {

// Splits examples (by index) into groups of equal sequence length.
std::vector<std::vector<std::size_t>> SameLengthGroups(const std::vector<Example>& data,
                                                       std::span<const std::size_t> indices) {
  std::map<std::size_t, std::vector<std::size_t>> by_length;
  for (std::size_t i : indices) by_length[data[i].ids.size()].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [len, group] : by_length) out.push_back(std::move(group));
  return out;
}

std::vector<std::span<const int>> Sequences(const std::vector<Example>& data, const std::vector<std::size_t>& group) {
  std::vector<std::span<const int>> out;
  for (std::size_t i : group) out.emplace_back(data[i].ids);
  return out;
}

}  // namespace

Json DownstreamReport::ToJson() const {
  Json seeds = Json::array();
  Json accuracies = Json::array();
  for (const auto& r : runs) {
    seeds.push_back(r.seed);
    accuracies.push_back(r.accuracy);
  }
  return {{"mode", GraphModeName(mode)}, {"seeds", seeds},   {"accuracies", accuracies},
          {"mean", mean},                {"stddev", stddev}, {"graph_params_unchanged", graph_params_unchanged},
          {"config", config}};
}

DownstreamReport RunDownstream(const DownstreamConfig& config) {
  config.Validate();
  std::optional<Checkpoint> checkpoint;
  if (ParseGraphMode(config.graph_mode) == GraphMode::kLearned) {
    if (config.checkpoint_path.empty()) throw ConfigError("downstream: graph_mode glomo needs checkpoint_path");
    checkpoint = LoadCheckpoint(config.checkpoint_path);
  }
  return RunDownstream(config, checkpoint ? &*checkpoint : nullptr);
}

DownstreamReport RunDownstream(const DownstreamConfig& config, const Checkpoint* checkpoint) {
  config.Validate();
  const GraphMode mode = ParseGraphMode(config.graph_mode);
  const FusionSite site = ParseFusionSite(config.site);

  std::vector<RawExample> train_raw, test_raw;
  if (config.task == "synthetic-pointer") {
    auto all = GeneratePointerDataset(config.pointer, config.train_size + config.test_size, config.data_seed);
    std::vector<LabeledText> train(all.begin(), all.begin() + config.train_size);
    std::vector<LabeledText> test(all.begin() + config.train_size, all.end());
    train_raw = PointerExamples(train);
    test_raw = PointerExamples(test);
  } else {
    train_raw = ReadLabeledCsv(config.train_csv);
    test_raw = ReadLabeledCsv(config.test_csv);
  }
  if (train_raw.empty() || test_raw.empty()) throw ValidationError("task: train and test splits must be nonempty");

  std::unique_ptr<PretrainedGraphs> graphs;
  TaskData data;
  int layers = 0, heads = 0;
  if (mode == GraphMode::kLearned) {
    if (!checkpoint) throw ValidationError("transfer: graph_mode glomo needs a checkpoint");
    if (!(checkpoint->config.ablation == config.ablation)) {
      throw CheckpointError(CheckpointError::Kind::kIncompatible,
                            "transfer: checkpoint was pretrained with different ablation flags than the run expects");
    }
    const ModelConfig m = checkpoint->config.Model();
    RequireGraphShape(*checkpoint, config.layers ? config.layers : m.layers, config.heads ? config.heads : m.heads);
    graphs = std::make_unique<PretrainedGraphs>(*checkpoint);
    layers = graphs->layers();
    heads = graphs->heads();
    if (layers < 1) throw ValidationError("transfer: checkpoint has no graph layers");
    data = EncodeTask(train_raw, test_raw, graphs->vocab(), config.allow_unknown_tokens);
  } else {
    data = EncodeTask(train_raw, test_raw, TaskVocab(train_raw, TokenMode::kChar), true);
  }

  DownstreamReport report;
  report.mode = mode;
  report.config = ToJson(config);
  const std::vector<double> frozen = graphs ? graphs->Snapshot() : std::vector<double>{};
  std::vector<double> accuracies;
  for (std::uint64_t seed : config.seeds) {
    TransferClassifier clf(data.vocab.size(), data.labels.size(), static_cast<std::size_t>(config.embedding_dim),
                           mode, site, layers, heads, seed);
    Adam adam(clf.params().tensors(), {config.learning_rate, 0.9, 0.999, 1e-8});
    Rng rng(seed);
    std::vector<std::size_t> order(data.train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
        const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
        adam.ZeroGrad();
        const double inv = 1.0 / static_cast<double>(end - start);
        std::span<const std::size_t> chunk(order.data() + start, end - start);
        for (const auto& group : SameLengthGroups(data.train, chunk)) {
          std::vector<int> targets;
          for (std::size_t i : group) targets.push_back(data.train[i].label);
          const std::vector<double> weights(group.size(), 1.0);
          Tensor loss = CrossEntropyRows(clf.Logits(Sequences(data.train, group), graphs.get()), targets, weights);
          ReverseAccumulate(Scale(SumAll(loss), inv));
        }
        ClipGradNorm(clf.params().tensors(), config.grad_clip);
        adam.Step();
      }
    }
    std::size_t correct = 0;
    std::vector<std::size_t> all(data.test.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t start = 0; start < all.size(); start += kEvalBatch) {
      std::span<const std::size_t> chunk(all.data() + start, std::min(kEvalBatch, all.size() - start));
      for (const auto& group : SameLengthGroups(data.test, chunk)) {
        const std::vector<int> predicted = clf.Predict(Sequences(data.test, group), graphs.get());
        for (std::size_t k = 0; k < group.size(); ++k) correct += predicted[k] == data.test[group[k]].label;
      }
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(data.test.size());
    report.runs.push_back({seed, acc});
    accuracies.push_back(acc);
    if (graphs && graphs->Snapshot() != frozen) report.graph_params_unchanged = false;
  }
  report.mean = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / static_cast<double>(accuracies.size());
  report.stddev = SampleStddev(accuracies, report.mean);
  if (!config.report_path.empty()) {
    std::ofstream out(config.report_path, std::ios::trunc);
    if (!out) throw ValidationError("transfer: cannot write report '" + config.report_path + "'");
    out << report.ToJson().dump(2) << '\n';
  }
  return report;
}

}  // namespace relgraph
