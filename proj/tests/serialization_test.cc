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

#include <cstring>
#include <fstream>

#include "relgraph/checkpoint.h"
#include "relgraph/context_objective.h"
#include "relgraph/errors.h"
#include "relgraph/graph_dump.h"
#include "relgraph/heatmap.h"
#include "test_support.h"

namespace relgraph {
namespace {

using testing::BitEqual;
using testing::Gen;
using testing::SmallModel;
using Kind = CheckpointError::Kind;

struct Saved {
  TrainConfig config;
  Vocab vocab = Vocab::Build("abcdefghij", TokenMode::kChar, 12);
  LatentGraphModel model;
  std::string bytes;

  Saved() : model(SmallModel(12), 1) {
    config.layers = 2;
    config.heads = 2;
    config.graph_dim = config.feature_dim = 8;
    config.attention_dim = 6;
    config.context_length = 2;
    config.vocab_size = 12;
    config.seq_len = 8;
    bytes = SerializeCheckpoint(config, vocab, model.params(), 17);
  }
};

Kind KindOf(const std::string& bytes) {
  try {
    ParseCheckpoint(bytes);
  } catch (const CheckpointError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed without error";
  return Kind::kIo;
}

TEST(Checkpoint, RoundTripIsBitExact) {
  Saved s;
  Checkpoint c = ParseCheckpoint(s.bytes);
  EXPECT_EQ(c.step, 17);
  EXPECT_EQ(ToJson(c.config), ToJson(s.config));
  EXPECT_EQ(c.vocab.ToJson(), s.vocab.ToJson());
  ASSERT_EQ(c.tensors.size(), s.model.params().size());
  for (const Tensor& p : s.model.params().tensors()) {
    const Tensor* stored = c.Find(p.name());
    ASSERT_NE(stored, nullptr) << p.name();
    EXPECT_TRUE(BitEqual(*stored, p)) << p.name();
  }
  LatentGraphModel other(SmallModel(12, 2, 2), 99);
  RestoreParameters(c, other.params());
  EXPECT_EQ(SerializeCheckpoint(s.config, s.vocab, other.params(), 17), s.bytes);
}

TEST(Checkpoint, ErrorTaxonomy) {
  Saved s;
  std::string b = s.bytes;
  b[0] = 'X';
  EXPECT_EQ(KindOf(b), Kind::kBadMagic);
  EXPECT_EQ(KindOf("RG"), Kind::kBadMagic);

  b = s.bytes;
  b[4] = 2;
  EXPECT_EQ(KindOf(b), Kind::kVersion);

  b = s.bytes;
  b[16] = '#';
  EXPECT_EQ(KindOf(b), Kind::kCorruptManifest);

  EXPECT_EQ(KindOf(s.bytes.substr(0, s.bytes.size() - 8)), Kind::kTruncatedBlob);
  EXPECT_EQ(KindOf(s.bytes + std::string(8, '\0')), Kind::kCorruptManifest);

  try {
    LoadCheckpoint(std::string(RELGRAPH_TEST_TMP) + "/does-not-exist.ck");
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), Kind::kIo);
  }
}

TEST(Checkpoint, ShapeAndCompatibilityChecks) {
  Saved s;
  Checkpoint c = ParseCheckpoint(s.bytes);
  EXPECT_NO_THROW(RequireGraphShape(c, 2, 2));
  try {
    RequireGraphShape(c, 3, 2);
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), Kind::kIncompatible);
  }
  LatentGraphModel wider(SmallModel(14), 1);
  try {
    RestoreParameters(c, wider.params());
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), Kind::kShapeMismatch);
  }
  LatentGraphModel deeper(SmallModel(12, 3, 2), 1);
  try {
    RestoreParameters(c, deeper.params());
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_EQ(e.kind(), Kind::kIncompatible);
  }
}

// Property: any truncation of a valid checkpoint is rejected with a
// checkpoint error, never a crash or a silent parse.
TEST(CheckpointProperty, TruncationsRejected) {
  Saved s;
  Gen gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t cut = gen.Int(0, static_cast<int>(s.bytes.size()) - 1);
    EXPECT_THROW(ParseCheckpoint(s.bytes.substr(0, cut)), CheckpointError) << cut;
  }
}

AffinityStack ExtractStack(Direction dir) {
  LatentGraphModel model(SmallModel(12, 2, 4), 3);
  const std::vector<int> ids{1, 4, 2, 7, 3};
  return model.ExtractGraphs(ids, dir);
}

TEST(GraphDump, SizeAndLayout) {
  AffinityStack s = ExtractStack(Direction::kForward);
  GraphDump d = DumpFromStack(s);
  EXPECT_EQ(d.payload.size(), 2u * 4 * 5 * 5);
  const std::string bytes = SerializeGraphDump(d);
  EXPECT_EQ(bytes.size(), kGraphDumpHeaderSize + 200 * sizeof(float));
  EXPECT_EQ(bytes.substr(0, 4), "GLG1");
  for (std::uint32_t l = 0; l < 2; ++l)
    for (std::uint32_t h = 0; h < 4; ++h)
      for (std::uint32_t j = 0; j < 5; ++j)
        for (std::uint32_t t = 0; t < 5; ++t)
          EXPECT_EQ(d.at(l, h, j, t), static_cast<float>(s.at(l, h).at(j, t)));
  // Column t of the first matrix is contiguous.
  float first_column[5];
  std::memcpy(first_column, bytes.data() + kGraphDumpHeaderSize + 5 * sizeof(float) * 2, sizeof first_column);
  for (std::uint32_t j = 0; j < 5; ++j) EXPECT_EQ(first_column[j], d.at(0, 0, j, 2));
}

TEST(GraphDump, RoundTripWithinSinglePrecision) {
  for (Direction dir : {Direction::kForward, Direction::kBackward}) {
    AffinityStack s = ExtractStack(dir);
    GraphDump back = ParseGraphDump(SerializeGraphDump(DumpFromStack(s)));
    EXPECT_EQ(back.direction, dir);
    AffinityStack wide = StackFromDump(back);
    ASSERT_EQ(wide.graphs.size(), s.graphs.size());
    for (std::size_t m = 0; m < s.graphs.size(); ++m)
      for (std::size_t i = 0; i < s.graphs[m].size(); ++i)
        EXPECT_NEAR(wide.graphs[m].at(i), s.graphs[m].at(i), 6e-8 * std::max(1.0, s.graphs[m].at(i)));
  }
}

TEST(GraphDump, Rejections) {
  const std::string good = SerializeGraphDump(DumpFromStack(ExtractStack(Direction::kForward)));
  std::string b = good;
  b[0] = 'X';
  EXPECT_THROW(ParseGraphDump(b), GraphDumpError);
  b = good;
  b[4] = 9;
  EXPECT_THROW(ParseGraphDump(b), GraphDumpError);
  b = good;
  b[8] = 2;
  EXPECT_THROW(ParseGraphDump(b), GraphDumpError);
  EXPECT_THROW(ParseGraphDump(good.substr(0, good.size() - 4)), GraphDumpError);
  EXPECT_THROW(ParseGraphDump(good.substr(0, 10)), GraphDumpError);
  GraphDump d;
  d.layers = d.heads = 1;
  d.length = 2;
  d.payload = {1.0f};
  EXPECT_THROW(SerializeGraphDump(d), GraphDumpError);
}

GraphDump Single(const Tensor& g, Direction dir) {
  AffinityStack s;
  s.direction = dir;
  s.layers = s.heads = 1;
  s.length = g.dim(0);
  s.graphs = {g};
  return DumpFromStack(s);
}

TEST(Heatmap, Levels) {
  EXPECT_EQ(HeatmapLevel(0.0), 255);
  EXPECT_EQ(HeatmapLevel(1.0), 0);
  EXPECT_EQ(HeatmapLevel(0.5), 128);
  EXPECT_EQ(HeatmapLevel(-3.0), 255);
  EXPECT_EQ(HeatmapLevel(7.0), 0);
}

TEST(Heatmap, IdentityHasDarkDiagonal) {
  Tensor eye = Tensor::FromData({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  Image img = RenderHeatmap(Single(eye, Direction::kForward), 0, 0, 2);
  EXPECT_EQ(img.width, 6u);
  EXPECT_EQ(img.height, 6u);
  for (std::size_t y = 0; y < 6; ++y)
    for (std::size_t x = 0; x < 6; ++x)
      for (int c = 0; c < 3; ++c) EXPECT_EQ(img.rgb[(y * 6 + x) * 3 + c], y / 2 == x / 2 ? 0 : 255);
}

// Inverting the colormap recovers every weight to within one gray level.
TEST(HeatmapProperty, InverseColormap) {
  Gen gen(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen.Int(1, 9);
    const Direction dir = gen.Coin() ? Direction::kForward : Direction::kBackward;
    Tensor g = gen.Stochastic(n, dir);
    GraphDump d = Single(g, dir);
    Image img = DecodePpm(EncodePpm(RenderHeatmap(d, 0, 0, 1)));
    ASSERT_EQ(img.width, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t t = 0; t < n; ++t)
        EXPECT_NEAR(1.0 - img.rgb[(j * n + t) * 3] / 255.0, g.at(j, t), 0.5 / 255 + 1e-7);
  }
}

TEST(Heatmap, UniformRowZero) {
  Tensor u = Tensor::FromData({3, 3}, {1, 0.5, 1.0 / 3, 0, 0.5, 1.0 / 3, 0, 0, 1.0 / 3});
  Image img = RenderHeatmap(Single(u, Direction::kForward), 0, 0, 1);
  EXPECT_EQ(img.rgb[0], 0);
  EXPECT_EQ(img.rgb[3], 128);
  EXPECT_EQ(img.rgb[6], 170);
  EXPECT_EQ(img.rgb[9], 255);
}

TEST(Heatmap, PpmFormatAndRangeChecks) {
  Image img = RenderHeatmap(Single(Tensor::FromData({1, 1}, {1}), Direction::kForward), 0, 0, 1);
  EXPECT_EQ(EncodePpm(img), std::string("P6\n1 1\n255\n") + std::string(3, '\0'));
  EXPECT_THROW(DecodePpm("P3\n1 1\n255\n"), ValidationError);
  EXPECT_THROW(DecodePpm("P6\n2 2\n255\nab"), ValidationError);
  GraphDump d = DumpFromStack(ExtractStack(Direction::kBackward));
  EXPECT_THROW(RenderHeatmap(d, 2, 0, 1), ValidationError);
  EXPECT_THROW(RenderHeatmap(d, 0, 4, 1), ValidationError);
  EXPECT_THROW(RenderHeatmap(d, 0, 0, 0), ValidationError);
}

}  // namespace
}  // namespace relgraph
