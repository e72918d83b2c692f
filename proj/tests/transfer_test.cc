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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "relgraph/checkpoint.h"
#include "relgraph/downstream.h"
#include "relgraph/errors.h"
#include "relgraph/trainer.h"
#include "relgraph/transfer.h"
#include "test_support.h"

namespace relgraph {
namespace {

using testing::BitEqual;
using testing::CheckStochastic;
using testing::Gen;
using testing::TempDir;

AffinityStack RandomStack(Gen& gen, int layers, int heads, std::size_t n, Direction dir) {
  AffinityStack s;
  s.direction = dir;
  s.layers = layers;
  s.heads = heads;
  s.length = n;
  for (int i = 0; i < layers * heads; ++i) s.graphs.push_back(gen.Stochastic(n, dir));
  return s;
}

std::vector<double> NaiveProduct(const Tensor& a, const Tensor& b) {
  const std::size_t n = a.dim(0);
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out[i * n + j] += a.at(i, k) * b.at(k, j);
  return out;
}

TEST(CumulativeProducts, IdentityStaysIdentity) {
  AffinityStack s;
  s.layers = 3;
  s.heads = 1;
  s.length = 3;
  for (int l = 0; l < 3; ++l) s.graphs.push_back(Tensor::FromData({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  for (const Tensor& m : CumulativeProducts(s).graphs) EXPECT_TRUE(BitEqual(m, s.graphs[0]));
}

TEST(CumulativeProducts, HandExample) {
  AffinityStack s;
  s.layers = 2;
  s.heads = 1;
  s.length = 2;
  s.graphs = {Tensor::FromData({2, 2}, {1, 0, 0, 1}), Tensor::FromData({2, 2}, {0.5, 0.5, 0.5, 0.5})};
  AffinityStack p = CumulativeProducts(s);
  EXPECT_TRUE(BitEqual(p.at(0, 0), s.graphs[0]));
  EXPECT_EQ(std::vector<double>(p.at(1, 0).values().begin(), p.at(1, 0).values().end()),
            (std::vector<double>{0.5, 0.5, 0.5, 0.5}));
}

// Property: Lambda^l = Lambda^{l-1} G^l per head, and products of masked
// column-stochastic matrices stay masked and column-stochastic.
TEST(CumulativeProductsProperty, MatchesLoopsAndStaysStochastic) {
  Gen gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int layers = gen.Int(1, 4), heads = gen.Int(1, 3);
    const std::size_t n = gen.Int(1, 7);
    const Direction dir = gen.Coin() ? Direction::kForward : Direction::kBackward;
    AffinityStack s = RandomStack(gen, layers, heads, n, dir);
    AffinityStack p = CumulativeProducts(s);
    ASSERT_EQ(p.graphs.size(), s.graphs.size());
    for (int h = 0; h < heads; ++h) {
      EXPECT_TRUE(BitEqual(p.at(0, h), s.at(0, h)));
      for (int l = 1; l < layers; ++l) {
        auto want = NaiveProduct(p.at(l - 1, h), s.at(l, h));
        for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(p.at(l, h).at(i), want[i], 1e-14);
      }
      for (int l = 0; l < layers; ++l) {
        auto r = CheckStochastic(p.at(l, h), dir);
        EXPECT_LE(r.worst_sum_error, 1e-6);
        EXPECT_TRUE(r.mask_exact);
      }
    }
  }
}

Tensor Logits(std::vector<double> v) {
  const std::size_t n = v.size();
  return Tensor::FromData({1, n}, std::move(v));
}

TEST(MixGraphs, EqualLogitsOverOneGraph) {
  Gen gen(2);
  AffinityStack s = RandomStack(gen, 1, 1, 4, Direction::kForward);
  Tensor m = MixGraphs(s, CumulativeProducts(s), Logits({0.0, 0.0}));
  EXPECT_TRUE(BitEqual(m, s.graphs[0]));
}

TEST(MixGraphs, SaturatedLogitSelectsOneComponent) {
  Gen gen(3);
  AffinityStack s = RandomStack(gen, 2, 2, 5, Direction::kBackward);
  AffinityStack p = CumulativeProducts(s);
  for (int pick = 0; pick < 8; ++pick) {
    std::vector<double> logits(8, -30.0);
    logits[pick] = 30.0;
    Tensor m = MixGraphs(s, p, Logits(logits));
    const Tensor& want = pick < 4 ? s.graphs[pick] : p.graphs[pick - 4];
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(m.at(i), want.at(i), 1e-9);
  }
}

TEST(MixGraphs, LengthMismatchRejected) {
  Gen gen(4);
  AffinityStack s = RandomStack(gen, 2, 1, 3, Direction::kForward);
  EXPECT_THROW(MixGraphs(s, CumulativeProducts(s), Logits({0, 0, 0})), ShapeError);
}

// Property: mixtures are column-stochastic and masked, and shifting every
// logit by a constant leaves them unchanged.
TEST(MixGraphsProperty, ConvexAndShiftInvariant) {
  Gen gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int layers = gen.Int(1, 3), heads = gen.Int(1, 3);
    const Direction dir = gen.Coin() ? Direction::kForward : Direction::kBackward;
    AffinityStack s = RandomStack(gen, layers, heads, gen.Int(1, 8), dir);
    AffinityStack p = CumulativeProducts(s);
    auto logits = gen.Values(2 * layers * heads, 4.0);
    const double shift = gen.Real(-20.0, 20.0);
    auto shifted = logits;
    for (double& v : shifted) v += shift;
    Tensor m = MixGraphs(s, p, Logits(logits));
    Tensor m2 = MixGraphs(s, p, Logits(shifted));
    auto r = CheckStochastic(m, dir);
    EXPECT_LE(r.worst_sum_error, 1e-6);
    EXPECT_TRUE(r.mask_exact);
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(m.at(i), m2.at(i), 1e-9);
  }
}

TEST(MixtureSpec, StartsUniform) {
  ParameterSet params;
  MixtureSpec spec = MixtureSpec::Create(params, "mix", 2, 3);
  EXPECT_EQ(spec.forward_logits.shape(), (Shape{1, 12}));
  for (double v : spec.backward_logits.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(params.size(), 2u);
}

TEST(UniformGraph, ForwardThree) {
  Tensor u = UniformGraph(3, Direction::kForward);
  const std::vector<double> want{1.0, 0.5, 1.0 / 3, 0.0, 0.5, 1.0 / 3, 0.0, 0.0, 1.0 / 3};
  EXPECT_EQ(std::vector<double>(u.values().begin(), u.values().end()), want);
}

TEST(UniformGraph, StochasticWithExactMask) {
  for (std::size_t n = 1; n <= 30; ++n) {
    for (Direction dir : {Direction::kForward, Direction::kBackward}) {
      auto r = CheckStochastic(UniformGraph(n, dir), dir);
      EXPECT_LE(r.worst_sum_error, 1e-15);
      EXPECT_TRUE(r.mask_exact);
    }
  }
}

struct FuseFixture {
  Gen gen{6};
  Tensor h = gen.Matrix(4, 3);
  Tensor mf = gen.Stochastic(4, Direction::kForward);
  Tensor mb = gen.Stochastic(4, Direction::kBackward);
  FusionParams p{gen.Matrix(6, 3), gen.Matrix(6, 3)};
};

// Scalar re-derivation of the gated fusion.
std::vector<double> FuseOracle(const FuseFixture& f) {
  const std::size_t n = 4, d = 3;
  std::vector<double> out(n * 2 * d);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<double> x(2 * d);
    for (std::size_t c = 0; c < d; ++c) {
      double hm = 0.0;
      for (std::size_t j = 0; j < n; ++j) hm += 0.5 * (f.mf.at(j, t) + f.mb.at(j, t)) * f.h.at(j, c);
      x[c] = f.h.at(t, c);
      x[d + c] = hm;
    }
    for (std::size_t o = 0; o < d; ++o) {
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < 2 * d; ++i) {
        a += x[i] * f.p.w1.at(i, o);
        b += x[i] * f.p.w2.at(i, o);
      }
      out[t * 2 * d + o] = f.h.at(t, o);
      out[t * 2 * d + d + o] = a / (1.0 + std::exp(-b));
    }
  }
  return out;
}

TEST(Fuse, MatchesScalarOracle) {
  FuseFixture f;
  Tensor out = Fuse(f.h, f.mf, f.mb, f.p);
  ASSERT_EQ(out.shape(), (Shape{4, 6}));
  auto want = FuseOracle(f);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(out.at(i), want[i], 1e-14);
}

TEST(Fuse, ZeroGateWeightsHalveTheProjection) {
  FuseFixture f;
  for (double& v : f.p.w2.mutable_values()) v = 0.0;
  Tensor eye = Tensor::FromData({4, 4}, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  Tensor out = Fuse(f.h, eye, eye, f.p);
  // Identity graphs: HM = H, so X = [H, H].
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t o = 0; o < 3; ++o) {
      double a = 0.0;
      for (std::size_t i = 0; i < 3; ++i) a += f.h.at(t, i) * (f.p.w1.at(i, o) + f.p.w1.at(3 + i, o));
      EXPECT_NEAR(out.at(t, 3 + o), 0.5 * a, 1e-14);
    }
}

TEST(Fuse, ZeroProjectionLeavesOnlyH) {
  FuseFixture f;
  for (double& v : f.p.w1.mutable_values()) v = 0.0;
  Tensor out = Fuse(f.h, f.mf, f.mb, f.p);
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t o = 0; o < 3; ++o) {
      EXPECT_EQ(out.at(t, o), f.h.at(t, o));
      EXPECT_EQ(out.at(t, 3 + o), 0.0);
    }
  EXPECT_THROW(Fuse(f.h, Tensor::Zeros({3, 3}), f.mb, f.p), ShapeError);
}

TEST(GraphModes, Names) {
  EXPECT_EQ(ParseGraphMode("glomo"), GraphMode::kLearned);
  EXPECT_EQ(ParseGraphMode("learned"), GraphMode::kLearned);
  EXPECT_EQ(ParseGraphMode("uniform"), GraphMode::kUniform);
  EXPECT_EQ(ParseGraphMode("none"), GraphMode::kNone);
  EXPECT_THROW(ParseGraphMode("random"), ConfigError);
  EXPECT_EQ(ParseFusionSite("embeddings"), FusionSite::kEmbeddings);
  EXPECT_THROW(ParseFusionSite("logits"), ConfigError);
}

TEST(DownstreamConfig, JsonRoundTripAndStrictKeys) {
  DownstreamConfig c;
  c.seeds = {4, 9};
  c.ablation.sequence_d1 = true;
  c.pointer.length = 30;
  c.checkpoint_path = "p.ck";
  Json j = ToJson(c);
  EXPECT_EQ(ToJson(DownstreamConfigFromJson(j)), j);
  EXPECT_TRUE(j.at("ablation").at("sequence_D1").get<bool>());
  j["extra"] = 0;
  EXPECT_THROW(DownstreamConfigFromJson(j), ConfigError);
  Json k = ToJson(c);
  k["seeds"] = Json::array();
  EXPECT_THROW(DownstreamConfigFromJson(k), ConfigError);
}

TEST(Csv, QuotingRules) {
  auto dir = TempDir("csv");
  const auto path = (dir / "a.csv").string();
  std::ofstream(path) << "label,text\r\npos,\"hello, \"\"world\"\"\"\nneg,\"two\nlines\"\nneg,plain\n";
  auto rows = ReadLabeledCsv(path);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].text, "hello, \"world\"");
  EXPECT_EQ(rows[0].label, "pos");
  EXPECT_EQ(rows[1].text, "two\nlines");
  EXPECT_EQ(rows[2].text, "plain");
  std::ofstream(path) << "text,class\nx,1\n";
  EXPECT_THROW(ReadLabeledCsv(path), ValidationError);
  std::ofstream(path) << "text,label\n\"open,1\n";
  EXPECT_THROW(ReadLabeledCsv(path), ValidationError);
  std::ofstream(path) << "text,label\na,1,extra\n";
  EXPECT_THROW(ReadLabeledCsv(path), ValidationError);
}

TEST(EncodeTask, UnknownTokensNeedOptIn) {
  Vocab v = Vocab::Build("abc", TokenMode::kChar, 10);
  std::vector<RawExample> train{{"ab", "x"}, {"ca", "y"}}, test{{"az", "x"}};
  try {
    EncodeTask(train, test, v, false);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("allow_unknown_tokens"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("'z'"), std::string::npos) << e.what();
  }
  TaskData d = EncodeTask(train, test, v, true);
  EXPECT_EQ(d.test[0].ids[1], Vocab::kUnknownId);
  EXPECT_EQ(d.labels, (std::vector<std::string>{"x", "y"}));
  std::vector<RawExample> bad_test{{"ab", "w"}};
  EXPECT_THROW(EncodeTask(train, bad_test, v, true), ValidationError);
}

TEST(Classifier, NoneModeHasNoGraphPath) {
  TransferClassifier none(10, 3, 8, GraphMode::kNone, FusionSite::kRnnStates, 2, 2, 1);
  for (const Tensor& t : none.params().tensors()) {
    EXPECT_EQ(t.name().find("clf.mix"), std::string::npos);
    EXPECT_EQ(t.name().find("clf.fuse"), std::string::npos);
  }
  TransferClassifier uni(10, 3, 8, GraphMode::kUniform, FusionSite::kEmbeddings, 2, 2, 1);
  EXPECT_TRUE(uni.params().Contains("clf.fuse.w1"));
  EXPECT_FALSE(uni.params().Contains("clf.mix.fwd"));
}

// Property: batched logits equal the per-sequence ones.
TEST(ClassifierProperty, BatchedMatchesSingle) {
  Gen gen(7);
  for (GraphMode mode : {GraphMode::kNone, GraphMode::kUniform}) {
    for (FusionSite site : {FusionSite::kEmbeddings, FusionSite::kRnnStates}) {
      TransferClassifier clf(10, 4, 6, mode, site, 1, 1, 3);
      const std::size_t n = gen.Int(1, 9);
      std::vector<std::vector<int>> seqs;
      for (int b = 0; b < 5; ++b) seqs.push_back(gen.Tokens(n, 10));
      std::vector<std::span<const int>> batch(seqs.begin(), seqs.end());
      Tensor all = clf.Logits(batch, nullptr);
      ASSERT_EQ(all.shape(), (Shape{5, 4}));
      for (std::size_t b = 0; b < 5; ++b) {
        Tensor one = clf.Logits(batch[b], nullptr);
        for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(all.at(b, c), one.at(0, c), 1e-13);
      }
    }
  }
}

// A few pretraining steps on the pointer corpus, enough to exercise the
// transfer path.
std::string TinyCheckpoint(const std::string& path, AblationFlags ablation = {}) {
  TrainConfig c;
  c.seq_len = 16;
  c.batch_size = 2;
  c.layers = 2;
  c.heads = 2;
  c.graph_dim = c.feature_dim = 8;
  c.attention_dim = 4;
  c.vocab_size = 48;
  c.steps = 2;
  c.ablation = ablation;
  c.synthetic.kind = "pointer";
  c.synthetic.length = 4000;
  c.checkpoint_path = path;
  Train(c, LoadCorpus(c));
  return path;
}

DownstreamConfig SmallDownstream(const std::string& mode, const std::string& checkpoint) {
  DownstreamConfig d;
  d.graph_mode = mode;
  d.checkpoint_path = checkpoint;
  d.train_size = 40;
  d.test_size = 20;
  d.epochs = 1;
  d.embedding_dim = 8;
  d.seeds = {1, 2, 3};
  return d;
}

TEST(RunDownstream, AllModesReport) {
  auto dir = TempDir("downstream");
  const std::string ck = TinyCheckpoint((dir / "p.ck").string());
  for (const char* mode : {"none", "uniform", "glomo"}) {
    for (const char* site : {"embeddings", "rnn-states"}) {
      DownstreamConfig d = SmallDownstream(mode, ck);
      d.site = site;
      d.report_path = (dir / (std::string(mode) + site + ".json")).string();
      DownstreamReport r = RunDownstream(d);
      ASSERT_EQ(r.runs.size(), 3u);
      double mean = 0.0, ss = 0.0;
      for (const auto& run : r.runs) mean += run.accuracy / 3.0;
      for (const auto& run : r.runs) ss += (run.accuracy - mean) * (run.accuracy - mean);
      EXPECT_NEAR(r.mean, mean, 1e-15);
      EXPECT_NEAR(r.stddev, std::sqrt(ss / 2.0), 1e-15);
      EXPECT_TRUE(r.graph_params_unchanged);
      Json j = LoadJsonFile(d.report_path);
      EXPECT_EQ(j.at("mode"), mode == std::string("glomo") ? "glomo" : mode);
      EXPECT_EQ(j.at("accuracies").size(), 3u);
      EXPECT_EQ(j.at("config").at("site"), site);
    }
  }
}

TEST(RunDownstream, FrozenGraphNetwork) {
  auto dir = TempDir("frozen");
  Checkpoint ck = LoadCheckpoint(TinyCheckpoint((dir / "p.ck").string()));
  PretrainedGraphs before(ck);
  const auto bytes = before.Snapshot();
  DownstreamReport r = RunDownstream(SmallDownstream("glomo", ""), &ck);
  EXPECT_TRUE(r.graph_params_unchanged);
  PretrainedGraphs after(ck);
  EXPECT_TRUE(BitEqual(std::span<const double>(bytes), std::span<const double>(after.Snapshot())));
}

TEST(RunDownstream, CheckpointCompatibility) {
  auto dir = TempDir("compat");
  const std::string ck = TinyCheckpoint((dir / "p.ck").string());
  DownstreamConfig d = SmallDownstream("glomo", ck);
  d.seeds = {1};
  d.layers = 2;
  EXPECT_NO_THROW(RunDownstream(d));
  d.layers = 3;
  try {
    RunDownstream(d);
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), CheckpointError::Kind::kIncompatible);
  }
  d.layers = 0;
  d.ablation.sparse_off = true;
  EXPECT_THROW(RunDownstream(d), CheckpointError);
  // Modes without learned graphs never open the checkpoint.
  DownstreamConfig u = SmallDownstream("uniform", (dir / "missing.ck").string());
  u.seeds = {1};
  EXPECT_NO_THROW(RunDownstream(u));
}

TEST(RunDownstream, CsvTask) {
  auto dir = TempDir("csvtask");
  const std::string ck = TinyCheckpoint((dir / "p.ck").string());
  std::ofstream(dir / "train.csv") << "text,label\nA1qq,one\nB2rr,two\nA1ss,one\nB2tt,two\n";
  std::ofstream(dir / "test.csv") << "text,label\nA1rr,one\nB2qq,two\n";
  DownstreamConfig d = SmallDownstream("glomo", ck);
  d.task = "csv";
  d.train_csv = (dir / "train.csv").string();
  d.test_csv = (dir / "test.csv").string();
  DownstreamReport r = RunDownstream(d);
  EXPECT_EQ(r.runs.size(), 3u);
  std::ofstream(dir / "test.csv") << "text,label\nA1~~,one\n";
  EXPECT_THROW(RunDownstream(d), ValidationError);
  d.allow_unknown_tokens = true;
  EXPECT_NO_THROW(RunDownstream(d));
}

}  // namespace
}  // namespace relgraph
