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

#ifndef RELGRAPH_VOCAB_H_
#define RELGRAPH_VOCAB_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relgraph/config.h"

namespace relgraph {

// Splits text into UTF-8 code points (char mode) or whitespace-separated
// words (word mode).
std::vector<std::string> Tokenize(std::string_view text, TokenMode mode);

class Vocab {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnknownId = 1;

  Vocab() = default;
  Vocab(TokenMode mode, std::vector<std::string> tokens);

  // Keeps the most frequent tokens, ties broken lexicographically, until the
  // vocabulary (reserved ids included) holds max_size entries.
  static Vocab Build(std::string_view corpus, TokenMode mode, std::size_t max_size);

  TokenMode mode() const { return mode_; }
  std::size_t size() const { return tokens_.size(); }
  int Id(const std::string& token) const;
  const std::string& Token(int id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<int> Encode(std::string_view text) const;
  // Fraction of tokens in `text` that map to the unknown id.
  double UnknownRate(std::string_view text) const;

  Json ToJson() const;
  static Vocab FromJson(const Json& json);

  bool operator==(const Vocab& other) const { return mode_ == other.mode_ && tokens_ == other.tokens_; }

 private:
  TokenMode mode_ = TokenMode::kChar;
  std::vector<std::string> tokens_;  // id -> token; ids 0 and 1 reserved
  std::unordered_map<std::string, int> ids_;
};

}  // namespace relgraph

#endif  // RELGRAPH_VOCAB_H_
