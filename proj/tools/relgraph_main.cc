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

// relgraph: train | extract-graphs | transfer | render-heatmap | check-gradients
//
// Exit status: 0 success, 1 usage error, 2 validation error, 3 runtime
// failure. Every error is reported as one JSON line on stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relgraph/checkpoint.h"
#include "relgraph/downstream.h"
#include "relgraph/errors.h"
#include "relgraph/gradient_suite.h"
#include "relgraph/graph_dump.h"
#include "relgraph/heatmap.h"
#include "relgraph/trainer.h"

namespace {

using relgraph::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

void ReportError(const char* category, const std::string& message, const char* kind = nullptr) {
  Json line = {{"error", category}, {"message", message}};
  if (kind) line["kind"] = kind;
  std::cerr << line.dump() << std::endl;
}

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--set", opts.overrides, "Override a config field, key=value (dotted keys for nesting)");
}

Json ConfigJson(const CommonOptions& opts, Json base) {
  if (!opts.config_path.empty()) base = relgraph::LoadJsonFile(opts.config_path);
  relgraph::ApplyOverrides(base, opts.overrides);
  return base;
}

int RunTrain(const CommonOptions& opts) {
  const relgraph::TrainConfig config = relgraph::TrainConfigFromJson(ConfigJson(opts, Json::object()));
  relgraph::TrainResult result = relgraph::Train(config, relgraph::LoadCorpus(config));
  Json summary = {{"steps", config.steps}, {"checkpoint", config.checkpoint_path}, {"metrics", config.metrics_path}};
  if (!result.losses.empty()) {
    summary["initial_loss"] = result.losses.front();
    summary["final_loss"] = result.losses.back();
  }
  std::cout << summary.dump() << std::endl;
  return kExitOk;
}

int RunExtract(const CommonOptions& opts, const std::string& input, const std::string& input_file,
               const std::string& checkpoint_path, const std::string& out) {
  if (input.empty() == input_file.empty()) throw CLI::ValidationError("extract-graphs", "give exactly one of --input and --input-file");
  (void)ConfigJson(opts, Json::object());
  std::string text = input;
  if (!input_file.empty()) {
    std::ifstream in(input_file, std::ios::binary);
    if (!in) throw relgraph::ValidationError("extract-graphs: cannot read '" + input_file + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  const relgraph::Checkpoint ck = relgraph::LoadCheckpoint(checkpoint_path);
  relgraph::PretrainedGraphs graphs(ck);
  const std::vector<int> ids = graphs.vocab().Encode(text);
  if (ids.empty()) throw relgraph::ValidationError("extract-graphs: input has no tokens");
  Json sidecar = {{"tokens", relgraph::Tokenize(text, graphs.vocab().mode())}, {"ids", ids}};
  Json files = Json::object();
  for (relgraph::Direction dir : {relgraph::Direction::kForward, relgraph::Direction::kBackward}) {
    const std::string path = out + (dir == relgraph::Direction::kForward ? ".fwd.glg" : ".bwd.glg");
    relgraph::WriteGraphDump(path, relgraph::DumpFromStack(graphs.Extract(ids, dir)));
    files[relgraph::DirectionName(dir)] = path;
  }
  std::ofstream tokens(out + ".tokens.json", std::ios::trunc);
  if (!tokens) throw relgraph::ValidationError("extract-graphs: cannot write '" + out + ".tokens.json'");
  tokens << sidecar.dump() << '\n';
  std::cout << Json{{"length", ids.size()}, {"layers", graphs.layers()}, {"heads", graphs.heads()}, {"dumps", files}}.dump()
            << std::endl;
  return kExitOk;
}

int RunTransfer(const CommonOptions& opts) {
  const relgraph::DownstreamConfig config = relgraph::DownstreamConfigFromJson(ConfigJson(opts, Json::object()));
  const relgraph::DownstreamReport report = relgraph::RunDownstream(config);
  std::cout << report.ToJson().dump() << std::endl;
  return kExitOk;
}

int RunHeatmap(const CommonOptions& opts, const std::string& dump_path, std::uint32_t layer, std::uint32_t head,
               std::uint32_t scale, const std::string& out) {
  (void)ConfigJson(opts, Json::object());
  const relgraph::GraphDump dump = relgraph::ReadGraphDump(dump_path);
  const relgraph::Image image = relgraph::RenderHeatmap(dump, layer, head, scale);
  relgraph::WritePpm(out, image);
  std::cout << Json{{"width", image.width}, {"height", image.height}, {"out", out}}.dump() << std::endl;
  return kExitOk;
}

int RunCheckGradients(const CommonOptions& opts) {
  relgraph::GradientSuiteOptions suite = relgraph::TinyGradientSuite();
  Json base = {{"model", relgraph::ToJson(suite.model)},
               {"length", suite.length},
               {"seed", suite.seed},
               {"scale", suite.scale},
               {"step", suite.step},
               {"tolerance", suite.tolerance}};
  Json j = ConfigJson(opts, base);
  if (!j.is_object()) throw relgraph::ConfigError("check-gradients: config must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!base.contains(it.key())) throw relgraph::ConfigError("check-gradients: unknown key '" + it.key() + "'");
  }
  try {
    Json model = base["model"];
    if (j.contains("model")) model.merge_patch(j["model"]);
    suite.model = relgraph::ModelConfigFromJson(model);
    suite.length = j.value("length", suite.length);
    suite.seed = j.value("seed", suite.seed);
    suite.scale = j.value("scale", suite.scale);
    suite.step = j.value("step", suite.step);
    suite.tolerance = j.value("tolerance", suite.tolerance);
  } catch (const Json::exception& e) {
    throw relgraph::ConfigError(std::string("check-gradients: ") + e.what());
  }
  if (suite.length < 2 || !(suite.step > 0) || !(suite.tolerance > 0)) {
    throw relgraph::ConfigError("check-gradients: need length >= 2 and positive step and tolerance");
  }
  const Json report = relgraph::ToJson(relgraph::RunGradientSuite(suite));
  std::cout << report.dump() << std::endl;
  if (!report["pass"].get<bool>()) {
    ReportError("runtime", "gradient check failed");
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent graph pretraining and transfer"};
  app.require_subcommand(1);

  CommonOptions common;
  CLI::App* train = app.add_subcommand("train", "Pretrain the graph and feature networks");
  AddCommon(train, common);

  std::string input, input_file, checkpoint, out;
  CLI::App* extract = app.add_subcommand("extract-graphs", "Write affinity dumps for one input");
  AddCommon(extract, common);
  extract->add_option("--input", input, "Input text");
  extract->add_option("--input-file", input_file, "File holding the input text");
  extract->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  extract->add_option("--out", out, "Output prefix; writes <out>.fwd.glg, <out>.bwd.glg, <out>.tokens.json")
      ->required();

  CLI::App* transfer = app.add_subcommand("transfer", "Train downstream classifiers and write a report");
  AddCommon(transfer, common);

  std::string dump_path, image_out;
  std::uint32_t layer = 0, head = 0, scale = 8;
  CLI::App* heatmap = app.add_subcommand("render-heatmap", "Render one affinity matrix as a PPM image");
  AddCommon(heatmap, common);
  heatmap->add_option("--dump", dump_path, "Graph dump file")->required();
  heatmap->add_option("--layer", layer, "Layer index");
  heatmap->add_option("--head", head, "Head index");
  heatmap->add_option("--scale", scale, "Pixels per cell")->check(CLI::PositiveNumber);
  heatmap->add_option("--out", image_out, "Output image (.ppm)")->required();

  CLI::App* grads = app.add_subcommand("check-gradients", "Finite-difference checks on a tiny model");
  AddCommon(grads, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cout << app.help();
    ReportError("usage", e.what());
    return kExitUsage;
  }

  try {
    if (*train) return RunTrain(common);
    if (*extract) return RunExtract(common, input, input_file, checkpoint, out);
    if (*transfer) return RunTransfer(common);
    if (*heatmap) return RunHeatmap(common, dump_path, layer, head, scale, image_out);
    if (*grads) return RunCheckGradients(common);
  } catch (const CLI::Error& e) {
    ReportError("usage", e.what());
    return kExitUsage;
  } catch (const relgraph::CheckpointError& e) {
    ReportError("validation", e.what(), relgraph::CheckpointErrorKindName(e.kind()));
    return kExitValidation;
  } catch (const relgraph::ValidationError& e) {
    ReportError("validation", e.what());
    return kExitValidation;
  } catch (const relgraph::NonFiniteLossError& e) {
    ReportError("runtime", e.what(), "non_finite_loss");
    return kExitRuntime;
  } catch (const std::exception& e) {
    ReportError("runtime", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
