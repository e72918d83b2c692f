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

#ifndef RELGRAPH_ERRORS_H_
#define RELGRAPH_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace relgraph {

// Operand shapes violate an operation's shape rule.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad user input: config, token ids, CLI arguments that parse but do not
// validate. Maps to CLI exit status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CheckpointError : public ValidationError {
 public:
  enum class Kind { kIo, kBadMagic, kVersion, kCorruptManifest, kShapeMismatch, kTruncatedBlob, kIncompatible };

  CheckpointError(Kind kind, const std::string& message)
      : ValidationError(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* CheckpointErrorKindName(CheckpointError::Kind kind);

class GraphDumpError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Training diverged. Maps to CLI exit status 3.
class NonFiniteLossError : public std::runtime_error {
 public:
  NonFiniteLossError(std::int64_t step, const std::string& message)
      : std::runtime_error(message), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace relgraph

#endif  // RELGRAPH_ERRORS_H_
