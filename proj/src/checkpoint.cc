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

#include "relgraph/checkpoint.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "relgraph/errors.h"

namespace relgraph {
namespace {

using Kind = CheckpointError::Kind;

constexpr char kMagic[4] = {'R', 'G', 'C', 'K'};
constexpr std::size_t kHeaderSize = 4 + 4 + 8;

template <typename T>
void PutLe(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <typename T>
T GetLe(const std::string& in, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return value;
}

}  // namespace

const char* CheckpointErrorKindName(CheckpointError::Kind kind) {
  switch (kind) {
    case Kind::kIo: return "io";
    case Kind::kBadMagic: return "bad_magic";
    case Kind::kVersion: return "unsupported_version";
    case Kind::kCorruptManifest: return "corrupt_manifest";
    case Kind::kShapeMismatch: return "shape_mismatch";
    case Kind::kTruncatedBlob: return "truncated_blob";
    case Kind::kIncompatible: return "incompatible";
  }
  return "unknown";
}

const Tensor* Checkpoint::Find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

std::string SerializeCheckpoint(const TrainConfig& config, const Vocab& vocab, const ParameterSet& params,
                                std::int64_t step) {
  Json entries = Json::array();
  std::string blob;
  for (const Tensor& t : params.tensors()) {
    entries.push_back({{"name", t.name()},
                       {"shape", t.shape()},
                       {"offset", blob.size()},
                       {"length", t.size() * sizeof(double)}});
    for (double v : t.values()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      PutLe(blob, bits);
    }
  }
  Json manifest = {{"format_version", kCheckpointVersion},
                   {"config", ToJson(config)},
                   {"vocab", vocab.ToJson()},
                   {"step", step},
                   {"entries", entries},
                   {"blob_length", blob.size()}};
  const std::string text = manifest.dump();
  std::string out(kMagic, sizeof kMagic);
  PutLe<std::uint32_t>(out, kCheckpointVersion);
  PutLe<std::uint64_t>(out, text.size());
  out += text;
  out += blob;
  return out;
}

Checkpoint ParseCheckpoint(const std::string& bytes) {
  if (bytes.size() < kHeaderSize) throw CheckpointError(Kind::kBadMagic, "checkpoint: file too short for header");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw CheckpointError(Kind::kBadMagic, "checkpoint: bad magic, not a checkpoint file");
  }
  const auto version = GetLe<std::uint32_t>(bytes, 4);
  if (version != kCheckpointVersion) {
    throw CheckpointError(Kind::kVersion, "checkpoint: format version " + std::to_string(version) +
                                              " unsupported (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  const auto manifest_length = GetLe<std::uint64_t>(bytes, 8);
  if (manifest_length > bytes.size() - kHeaderSize) {
    throw CheckpointError(Kind::kCorruptManifest, "checkpoint: manifest length exceeds file size");
  }
  Checkpoint ck;
  std::size_t blob_length = 0;
  Json entries;
  try {
    Json manifest = Json::parse(bytes.substr(kHeaderSize, manifest_length));
    if (manifest.at("format_version").get<std::uint32_t>() != version) {
      throw CheckpointError(Kind::kCorruptManifest, "checkpoint: manifest version disagrees with header");
    }
    ck.config = TrainConfigFromJson(manifest.at("config"));
    ck.vocab = Vocab::FromJson(manifest.at("vocab"));
    ck.step = manifest.at("step").get<std::int64_t>();
    blob_length = manifest.at("blob_length").get<std::size_t>();
    entries = manifest.at("entries");
    if (!entries.is_array()) throw CheckpointError(Kind::kCorruptManifest, "checkpoint: entries is not a list");
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(Kind::kCorruptManifest, std::string("checkpoint: corrupt manifest: ") + e.what());
  }

  const std::size_t blob_start = kHeaderSize + manifest_length;
  const std::size_t available = bytes.size() - blob_start;
  if (available < blob_length) {
    throw CheckpointError(Kind::kTruncatedBlob, "checkpoint: blob truncated, " + std::to_string(available) +
                                                    " of " + std::to_string(blob_length) + " bytes present");
  }
  if (available > blob_length) {
    throw CheckpointError(Kind::kCorruptManifest, "checkpoint: " + std::to_string(available - blob_length) +
                                                      " unexpected bytes after the blob");
  }

  std::size_t expected_offset = 0;
  for (const Json& e : entries) {
    std::string name;
    Shape shape;
    std::size_t offset = 0;
    std::size_t length = 0;
    try {
      name = e.at("name").get<std::string>();
      shape = e.at("shape").get<Shape>();
      offset = e.at("offset").get<std::size_t>();
      length = e.at("length").get<std::size_t>();
    } catch (const std::exception& ex) {
      throw CheckpointError(Kind::kCorruptManifest, std::string("checkpoint: bad entry: ") + ex.what());
    }
    if (length != NumElements(shape) * sizeof(double)) {
      throw CheckpointError(Kind::kShapeMismatch, "checkpoint: entry '" + name + "' has shape " +
                                                      ShapeString(shape) + " but " + std::to_string(length) +
                                                      " bytes");
    }
    if (offset != expected_offset || offset + length > blob_length) {
      throw CheckpointError(Kind::kCorruptManifest, "checkpoint: entry '" + name +
                                                        "' overlaps another entry or leaves the blob");
    }
    expected_offset = offset + length;
    std::vector<double> values(length / sizeof(double));
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto bits = GetLe<std::uint64_t>(bytes, blob_start + offset + i * sizeof(double));
      std::memcpy(&values[i], &bits, sizeof bits);
    }
    Tensor t = Tensor::FromData(shape, std::move(values));
    t.set_name(name);
    ck.tensors.emplace_back(name, std::move(t));
  }
  if (expected_offset != blob_length) {
    throw CheckpointError(Kind::kCorruptManifest, "checkpoint: entries do not cover the blob");
  }
  return ck;
}

void SaveCheckpoint(const std::string& path, const TrainConfig& config, const Vocab& vocab,
                    const ParameterSet& params, std::int64_t step) {
  const std::string bytes = SerializeCheckpoint(config, vocab, params, step);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError(Kind::kIo, "checkpoint: cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError(Kind::kIo, "checkpoint: write to '" + path + "' failed");
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(Kind::kIo, "checkpoint: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCheckpoint(buffer.str());
}

void RestoreParameters(const Checkpoint& checkpoint, ParameterSet& params) {
  for (const Tensor& p : params.tensors()) {
    const Tensor* stored = checkpoint.Find(p.name());
    if (!stored) throw CheckpointError(Kind::kIncompatible, "checkpoint: missing parameter '" + p.name() + "'");
    if (stored->shape() != p.shape()) {
      throw CheckpointError(Kind::kShapeMismatch, "checkpoint: parameter '" + p.name() + "' stored as " +
                                                      ShapeString(stored->shape()) + ", model expects " +
                                                      ShapeString(p.shape()));
    }
    Tensor target = p;
    std::copy(stored->values().begin(), stored->values().end(), target.mutable_values().begin());
  }
}

void RequireGraphShape(const Checkpoint& checkpoint, int layers, int heads) {
  const ModelConfig m = checkpoint.config.Model();
  if (m.layers != layers || m.heads != heads) {
    throw CheckpointError(Kind::kIncompatible, "checkpoint: graph stack is L=" + std::to_string(m.layers) +
                                                   ", n_h=" + std::to_string(m.heads) + " but the run expects L=" +
                                                   std::to_string(layers) + ", n_h=" + std::to_string(heads));
  }
}

}  // namespace relgraph
