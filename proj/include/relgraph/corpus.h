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

// Seeded synthetic text sources for pretraining and for the pointer task.

#ifndef RELGRAPH_CORPUS_H_
#define RELGRAPH_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <random>

#include "relgraph/config.h"

namespace relgraph {

// `period` distinct symbols repeated until `length` characters.
std::string PeriodicCorpus(int period, std::int64_t length, std::uint64_t seed);
// Independent uniform draws from the first `alphabet` symbols.
std::string UniformCorpus(int alphabet, std::int64_t length, std::uint64_t seed);

// Pointer task: fillers with `pairs` (marker, value) bigrams at random
// positions; the last position holds the pointer naming one of the markers.
// The label is the value that follows that marker. Markers are uppercase,
// their pointers the matching lowercase letter, values are digits.
struct PointerTaskSpec {
  int length = 24;
  int pairs = 4;
  int markers = 8;
  int values = 8;
  int fillers = 12;

  void Validate() const;
  Json ToJson() const;
  static PointerTaskSpec FromJson(const Json& json);
};

struct LabeledText {
  std::string text;
  int label = 0;
};

LabeledText GeneratePointerExample(const PointerTaskSpec& spec, std::mt19937_64& rng);
std::vector<LabeledText> GeneratePointerDataset(const PointerTaskSpec& spec, std::size_t count,
                                                std::uint64_t seed);
// Unlabeled stream of episodes truncated to `length` characters. Each
// episode is a task body followed by `queries` (pointer, value) bigrams for
// markers drawn from the body.
std::string PointerCorpus(const PointerTaskSpec& spec, std::int64_t length, std::uint64_t seed, int queries = 3);

// Dispatches on spec.kind ("periodic", "uniform", "pointer").
std::string SyntheticCorpus(const SyntheticCorpusSpec& spec);

}  // namespace relgraph

#endif  // RELGRAPH_CORPUS_H_
