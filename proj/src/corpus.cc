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

#include "relgraph/corpus.h"

#include <algorithm>
#include <numeric>
#include <string_view>

#include "relgraph/errors.h"

namespace relgraph {
namespace {

constexpr std::string_view kAlphabet =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
constexpr std::string_view kMarkers = "ABCDEFGHIJKLMNOP";
constexpr std::string_view kPointers = "abcdefghijklmnop";
constexpr std::string_view kValues = "0123456789";
constexpr std::string_view kFillers = "qrstuvwxyz.,;:!?";

int Draw(std::mt19937_64& rng, int n) {
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

}  // namespace

std::string PeriodicCorpus(int period, std::int64_t length, std::uint64_t seed) {
  if (period < 1 || period > static_cast<int>(kAlphabet.size())) {
    throw ConfigError("periodic corpus: period must lie in [1, " + std::to_string(kAlphabet.size()) + "]");
  }
  std::string symbols(kAlphabet);
  std::mt19937_64 rng(seed);
  std::shuffle(symbols.begin(), symbols.end(), rng);
  std::string out;
  out.reserve(length);
  for (std::int64_t i = 0; i < length; ++i) out.push_back(symbols[i % period]);
  return out;
}

std::string UniformCorpus(int alphabet, std::int64_t length, std::uint64_t seed) {
  if (alphabet < 1 || alphabet > static_cast<int>(kAlphabet.size())) {
    throw ConfigError("uniform corpus: alphabet must lie in [1, " + std::to_string(kAlphabet.size()) + "]");
  }
  std::mt19937_64 rng(seed);
  std::string out;
  out.reserve(length);
  for (std::int64_t i = 0; i < length; ++i) out.push_back(kAlphabet[Draw(rng, alphabet)]);
  return out;
}

void PointerTaskSpec::Validate() const {
  if (markers < 1 || markers > static_cast<int>(kMarkers.size())) {
    throw ConfigError("pointer task: markers must lie in [1, " + std::to_string(kMarkers.size()) + "]");
  }
  if (values < 2 || values > static_cast<int>(kValues.size())) {
    throw ConfigError("pointer task: values must lie in [2, " + std::to_string(kValues.size()) + "]");
  }
  if (fillers < 1 || fillers > static_cast<int>(kFillers.size())) {
    throw ConfigError("pointer task: fillers must lie in [1, " + std::to_string(kFillers.size()) + "]");
  }
  if (pairs < 1 || pairs > markers) throw ConfigError("pointer task: pairs must lie in [1, markers]");
  if (length < 2 * pairs + 1) throw ConfigError("pointer task: length too short for the marker pairs");
}

Json PointerTaskSpec::ToJson() const {
  return {{"length", length}, {"pairs", pairs}, {"markers", markers}, {"values", values}, {"fillers", fillers}};
}

PointerTaskSpec PointerTaskSpec::FromJson(const Json& json) {
  PointerTaskSpec s;
  if (!json.is_object()) throw ConfigError("pointer task: expected an object");
  for (auto it = json.begin(); it != json.end(); ++it) {
    const std::string& k = it.key();
    if (k != "length" && k != "pairs" && k != "markers" && k != "values" && k != "fillers") {
      throw ConfigError("pointer task: unknown key '" + k + "'");
    }
  }
  s.length = json.value("length", s.length);
  s.pairs = json.value("pairs", s.pairs);
  s.markers = json.value("markers", s.markers);
  s.values = json.value("values", s.values);
  s.fillers = json.value("fillers", s.fillers);
  s.Validate();
  return s;
}

namespace {

struct PointerBody {
  std::string text;             // length - 1 characters
  std::vector<int> marker_ids;  // one per pair
  std::vector<int> value_ids;
};

PointerBody DrawBody(const PointerTaskSpec& spec, std::mt19937_64& rng) {
  PointerBody b;
  const int body = spec.length - 1;
  b.text.resize(body);
  for (int i = 0; i < body; ++i) b.text[i] = kFillers[Draw(rng, spec.fillers)];

  // Distinct markers; non-overlapping bigram slots by spreading the
  // body - 2*pairs free cells over pairs + 1 gaps.
  b.marker_ids.resize(spec.markers);
  std::iota(b.marker_ids.begin(), b.marker_ids.end(), 0);
  std::shuffle(b.marker_ids.begin(), b.marker_ids.end(), rng);
  b.marker_ids.resize(spec.pairs);
  const int free_cells = body - 2 * spec.pairs;
  std::vector<int> cuts(spec.pairs);
  for (int& c : cuts) c = Draw(rng, free_cells + 1);
  std::sort(cuts.begin(), cuts.end());
  b.value_ids.resize(spec.pairs);
  for (int p = 0; p < spec.pairs; ++p) {
    const int pos = cuts[p] + 2 * p;
    b.value_ids[p] = Draw(rng, spec.values);
    b.text[pos] = kMarkers[b.marker_ids[p]];
    b.text[pos + 1] = kValues[b.value_ids[p]];
  }
  return b;
}

}  // namespace

LabeledText GeneratePointerExample(const PointerTaskSpec& spec, std::mt19937_64& rng) {
  PointerBody b = DrawBody(spec, rng);
  const int asked = Draw(rng, spec.pairs);
  b.text.push_back(kPointers[b.marker_ids[asked]]);
  return {std::move(b.text), b.value_ids[asked]};
}

std::vector<LabeledText> GeneratePointerDataset(const PointerTaskSpec& spec, std::size_t count,
                                                std::uint64_t seed) {
  spec.Validate();
  std::mt19937_64 rng(seed);
  std::vector<LabeledText> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(GeneratePointerExample(spec, rng));
  return out;
}

std::string PointerCorpus(const PointerTaskSpec& spec, std::int64_t length, std::uint64_t seed, int queries) {
  spec.Validate();
  if (queries < 1) throw ConfigError("pointer corpus: queries must be positive");
  std::mt19937_64 rng(seed);
  std::string out;
  out.reserve(length + spec.length + 2 * queries);
  while (static_cast<std::int64_t>(out.size()) < length) {
    PointerBody b = DrawBody(spec, rng);
    out += b.text;
    for (int q = 0; q < queries; ++q) {
      const int asked = Draw(rng, spec.pairs);
      out.push_back(kPointers[b.marker_ids[asked]]);
      out.push_back(kValues[b.value_ids[asked]]);
    }
  }
  out.resize(length);
  return out;
}

std::string SyntheticCorpus(const SyntheticCorpusSpec& spec) {
  if (spec.kind == "periodic") return PeriodicCorpus(spec.period, spec.length, spec.seed);
  if (spec.kind == "uniform") return UniformCorpus(spec.alphabet, spec.length, spec.seed);
  if (spec.kind == "pointer") {
    PointerTaskSpec task;
    task.length = spec.pointer_length;
    return PointerCorpus(task, spec.length, spec.seed, spec.queries);
  }
  throw ConfigError("synthetic corpus: unknown kind '" + spec.kind + "'");
}

}  // namespace relgraph
