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

#include "relgraph/vocab.h"

#include <algorithm>
#include <map>

#include "relgraph/errors.h"

namespace relgraph {
namespace {

const char* const kPadToken = "<pad>";
const char* const kUnknownToken = "<unk>";

std::size_t CodePointLength(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;  // stray continuation byte: keep it as its own token
}

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

std::vector<std::string> Tokenize(std::string_view text, TokenMode mode) {
  std::vector<std::string> out;
  if (mode == TokenMode::kChar) {
    for (std::size_t i = 0; i < text.size();) {
      const std::size_t n = std::min(CodePointLength(static_cast<unsigned char>(text[i])), text.size() - i);
      out.emplace_back(text.substr(i, n));
      i += n;
    }
    return out;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

Vocab::Vocab(TokenMode mode, std::vector<std::string> tokens) : mode_(mode), tokens_(std::move(tokens)) {
  if (tokens_.size() < 2 || tokens_[0] != kPadToken || tokens_[1] != kUnknownToken) {
    throw ValidationError("vocab: ids 0 and 1 must be the reserved <pad> and <unk> entries");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw ValidationError("vocab: duplicate token '" + tokens_[i] + "'");
    }
  }
}

Vocab Vocab::Build(std::string_view corpus, TokenMode mode, std::size_t max_size) {
  if (corpus.empty()) throw ValidationError("build_vocab: empty corpus");
  if (max_size < 3) throw ValidationError("build_vocab: max_size must leave room for one real token");
  std::map<std::string, std::size_t> counts;
  for (auto& tok : Tokenize(corpus, mode)) ++counts[tok];
  if (counts.empty()) throw ValidationError("build_vocab: corpus has no tokens");
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens{kPadToken, kUnknownToken};
  for (const auto& [tok, n] : ranked) {
    if (tokens.size() >= max_size) break;
    if (tok == kPadToken || tok == kUnknownToken) continue;
    tokens.push_back(tok);
  }
  return Vocab(mode, std::move(tokens));
}

int Vocab::Id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnknownId : it->second;
}

std::vector<int> Vocab::Encode(std::string_view text) const {
  std::vector<int> ids;
  for (const auto& tok : Tokenize(text, mode_)) ids.push_back(Id(tok));
  return ids;
}

double Vocab::UnknownRate(std::string_view text) const {
  auto ids = Encode(text);
  if (ids.empty()) return 0.0;
  return static_cast<double>(std::count(ids.begin(), ids.end(), kUnknownId)) / static_cast<double>(ids.size());
}

Json Vocab::ToJson() const { return {{"mode", TokenModeName(mode_)}, {"tokens", tokens_}}; }

Vocab Vocab::FromJson(const Json& json) {
  if (!json.is_object() || !json.contains("mode") || !json.contains("tokens")) {
    throw ValidationError("vocab: expected {mode, tokens}");
  }
  return Vocab(ParseTokenMode(json.at("mode").get<std::string>()),
               json.at("tokens").get<std::vector<std::string>>());
}

}  // namespace relgraph
