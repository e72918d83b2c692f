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

#include "relgraph/gradient_suite.h"

#include <random>

#include "relgraph/context_objective.h"
#include "relgraph/ops.h"
#include "relgraph/transfer.h"

namespace relgraph {
namespace {

Tensor RandomLeaf(const std::string& name, Shape shape, double scale, Rng& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(NumElements(shape));
  for (double& x : v) x = u(rng);
  Tensor t = Tensor::FromData(std::move(shape), std::move(v), true);
  t.set_name(name);
  return t;
}

// Random column-stochastic matrix respecting the direction mask.
Tensor RandomGraph(std::size_t n, Direction dir, Rng& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> v(n * n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (Allowed(j, t, dir)) sum += v[j * n + t] = u(rng);
    }
    for (std::size_t j = 0; j < n; ++j) v[j * n + t] /= sum;
  }
  return Tensor::FromData({n, n}, std::move(v));
}

void Redraw(const ParameterSet& params, double scale, Rng& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (Tensor t : params.tensors()) {
    for (double& x : t.mutable_values()) x = u(rng);
  }
}

GradientSuiteEntry Check(const std::string& component, const std::function<Tensor()>& fn,
                         const std::vector<Tensor>& params, const GradientSuiteOptions& o) {
  GradientSuiteEntry e;
  e.component = component;
  e.report = FiniteDifferenceCheck(fn, params, o.step, o.tolerance);
  if (e.report.checked > 0) e.worst_parameter = params[e.report.worst_param].name();
  return e;
}

std::vector<int> RandomTokens(std::size_t n, int vocab, Rng& rng) {
  std::vector<int> ids(n);
  for (int& id : ids) id = std::uniform_int_distribution<int>(0, vocab - 1)(rng);
  return ids;
}

}  // namespace

GradientSuiteOptions TinyGradientSuite() {
  GradientSuiteOptions o;
  ModelConfig& m = o.model;
  m.vocab_size = 8;
  m.graph_dim = m.attention_dim = m.feature_dim = m.decoder_dim = 8;
  m.layers = 1;
  m.heads = 1;
  m.context_length = 2;
  m.bias_init = 0.5;
  o.length = 5;
  o.seed = 2;
  return o;
}

std::vector<GradientSuiteEntry> RunGradientSuite(const GradientSuiteOptions& o) {
  o.model.Validate();
  const std::size_t n = o.length;
  const std::size_t dg = o.model.graph_dim, da = o.model.attention_dim, df = o.model.feature_dim;
  Rng rng(o.seed);
  std::vector<GradientSuiteEntry> out;

  {
    Tensor keys = RandomLeaf("keys", {n, dg}, o.scale, rng);
    Tensor queries = RandomLeaf("queries", {n, dg}, o.scale, rng);
    Tensor wk = RandomLeaf("wk", {dg, da}, o.scale, rng);
    Tensor wq = RandomLeaf("wq", {dg, da}, o.scale, rng);
    Tensor bias = Tensor::Scalar(o.model.bias_init, true).set_name("bias");
    Tensor probe = RandomLeaf("probe", {n, n}, 1.0, rng).Detach();
    auto fn = [&] {
      Tensor sum;
      for (Direction dir : {Direction::kForward, Direction::kBackward}) {
        Tensor g = AffinityFromScores(AffinityScores(keys, queries, wk, wq, bias), dir, o.model.sparse);
        Tensor part = SumAll(Mul(g, probe));
        sum = sum.defined() ? Add(sum, part) : part;
      }
      return sum;
    };
    out.push_back(Check("affinity_layer", fn, {keys, queries, wk, wq, bias}, o));
  }

  {
    Rng init(o.seed + 1);
    ModelConfig m = o.model;
    m.heads = 2;
    FeaturePredictor f(m, init);
    Redraw(f.params(), o.scale, rng);
    Tensor prev = RandomLeaf("features", {n, df}, o.scale, rng);
    const Tensor graphs[] = {RandomGraph(n, Direction::kForward, rng), RandomGraph(n, Direction::kForward, rng)};
    Tensor probe = RandomLeaf("probe", {n, df}, 1.0, rng).Detach();
    auto fn = [&] { return SumAll(Mul(f.ComposeLayer(prev, graphs, 0, Direction::kForward), probe)); };
    std::vector<Tensor> params{prev};
    for (const Tensor& t : f.params().tensors()) {
      if (t.name().rfind("f.fwd.l0.", 0) == 0) params.push_back(t);
    }
    out.push_back(Check("compose_layer", fn, params, o));
  }

  {
    ParameterSet params;
    Rng init(o.seed + 2);
    ContextDecoder dec(o.model, "dec", params, init);
    Redraw(params, o.scale, rng);
    Tensor embedding = RandomLeaf("embedding", {static_cast<std::size_t>(o.model.vocab_size), df}, o.scale, rng);
    Tensor feature = RandomLeaf("feature", {1, df}, o.scale, rng);
    const std::vector<int> window = RandomTokens(static_cast<std::size_t>(o.model.context_length), o.model.vocab_size, rng);
    const int current = RandomTokens(1, o.model.vocab_size, rng)[0];
    auto fn = [&] { return dec.PositionNll(feature, current, window, embedding); };
    std::vector<Tensor> all = params.tensors();
    all.push_back(embedding);
    all.push_back(feature);
    out.push_back(Check("position_nll", fn, all, o));
  }

  {
    ParameterSet params;
    Rng init(o.seed + 3);
    const std::size_t dh = df;
    FusionParams fusion = FusionParams::Create(params, "fuse", dh, init);
    Redraw(params, o.scale, rng);
    Tensor h = RandomLeaf("H", {n, dh}, o.scale, rng);
    Tensor mf = RandomGraph(n, Direction::kForward, rng).set_requires_grad(true).set_name("M_fwd");
    Tensor mb = RandomGraph(n, Direction::kBackward, rng).set_requires_grad(true).set_name("M_bwd");
    Tensor probe = RandomLeaf("probe", {n, 2 * dh}, 1.0, rng).Detach();
    auto fn = [&] { return SumAll(Mul(Fuse(h, mf, mb, fusion), probe)); };
    out.push_back(Check("fuse", fn, {h, mf, mb, fusion.w1, fusion.w2}, o));
  }

  {
    LatentGraphModel model(o.model, o.seed + 4);
    Redraw(model.params(), o.scale, rng);
    const std::vector<int> tokens = RandomTokens(n, o.model.vocab_size, rng);
    auto fn = [&] { return TotalLoss(model, tokens).loss; };
    out.push_back(Check("total_loss", fn, model.params().tensors(), o));
  }
  return out;
}

Json ToJson(const std::vector<GradientSuiteEntry>& entries) {
  Json list = Json::array();
  bool pass = true;
  for (const auto& e : entries) {
    pass = pass && e.report.pass;
    list.push_back({{"component", e.component},
                    {"pass", e.report.pass},
                    {"max_rel_error", e.report.max_rel_error},
                    {"checked", e.report.checked},
                    {"worst_parameter", e.worst_parameter},
                    {"worst_index", e.report.worst_index},
                    {"message", e.report.message}});
  }
  return {{"pass", pass}, {"checks", list}};
}

}  // namespace relgraph
