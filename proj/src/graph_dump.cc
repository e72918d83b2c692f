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

#include "relgraph/graph_dump.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "relgraph/errors.h"

namespace relgraph {
namespace {

constexpr char kMagic[4] = {'G', 'L', 'G', '1'};

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32(const std::string& in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return v;
}

}  // namespace

GraphDump DumpFromStack(const AffinityStack& stack) {
  GraphDump dump;
  dump.direction = stack.direction;
  dump.layers = static_cast<std::uint32_t>(stack.layers);
  dump.heads = static_cast<std::uint32_t>(stack.heads);
  dump.length = static_cast<std::uint32_t>(stack.length);
  const std::size_t n = stack.length;
  dump.payload.reserve(stack.graphs.size() * n * n);
  for (const Tensor& g : stack.graphs) {
    auto v = g.values();
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t j = 0; j < n; ++j) dump.payload.push_back(static_cast<float>(v[j * n + t]));
    }
  }
  return dump;
}

AffinityStack StackFromDump(const GraphDump& dump) {
  AffinityStack stack;
  stack.direction = dump.direction;
  stack.layers = static_cast<int>(dump.layers);
  stack.heads = static_cast<int>(dump.heads);
  stack.length = dump.length;
  const std::size_t n = dump.length;
  for (std::uint32_t l = 0; l < dump.layers; ++l) {
    for (std::uint32_t h = 0; h < dump.heads; ++h) {
      std::vector<double> v(n * n);
      for (std::uint32_t t = 0; t < n; ++t) {
        for (std::uint32_t j = 0; j < n; ++j) v[j * n + t] = dump.at(l, h, j, t);
      }
      stack.graphs.push_back(Tensor::FromData({n, n}, std::move(v)));
    }
  }
  return stack;
}

std::string SerializeGraphDump(const GraphDump& dump) {
  const std::size_t expected = static_cast<std::size_t>(dump.layers) * dump.heads * dump.length * dump.length;
  if (dump.payload.size() != expected) {
    throw GraphDumpError("graph dump: payload holds " + std::to_string(dump.payload.size()) + " floats, header implies " +
                         std::to_string(expected));
  }
  std::string out(kMagic, sizeof kMagic);
  PutU32(out, kGraphDumpVersion);
  out.push_back(static_cast<char>(dump.direction));
  PutU32(out, dump.layers);
  PutU32(out, dump.heads);
  PutU32(out, dump.length);
  for (float f : dump.payload) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    PutU32(out, bits);
  }
  return out;
}

GraphDump ParseGraphDump(const std::string& bytes) {
  if (bytes.size() < kGraphDumpHeaderSize) throw GraphDumpError("graph dump: file shorter than the 21-byte header");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) throw GraphDumpError("graph dump: bad magic");
  const std::uint32_t version = GetU32(bytes, 4);
  if (version != kGraphDumpVersion) {
    throw GraphDumpError("graph dump: unsupported format version " + std::to_string(version));
  }
  const auto dir = static_cast<unsigned char>(bytes[8]);
  if (dir > 1) throw GraphDumpError("graph dump: direction byte " + std::to_string(dir) + " is neither 0 nor 1");
  GraphDump dump;
  dump.direction = static_cast<Direction>(dir);
  dump.layers = GetU32(bytes, 9);
  dump.heads = GetU32(bytes, 13);
  dump.length = GetU32(bytes, 17);
  const std::size_t count = static_cast<std::size_t>(dump.layers) * dump.heads * dump.length * dump.length;
  if (bytes.size() - kGraphDumpHeaderSize != count * 4) {
    throw GraphDumpError("graph dump: payload is " + std::to_string(bytes.size() - kGraphDumpHeaderSize) +
                         " bytes, header implies " + std::to_string(count * 4));
  }
  dump.payload.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t bits = GetU32(bytes, kGraphDumpHeaderSize + 4 * i);
    std::memcpy(&dump.payload[i], &bits, sizeof bits);
  }
  return dump;
}

void WriteGraphDump(const std::string& path, const GraphDump& dump) {
  const std::string bytes = SerializeGraphDump(dump);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GraphDumpError("graph dump: cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw GraphDumpError("graph dump: write to '" + path + "' failed");
}

GraphDump ReadGraphDump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphDumpError("graph dump: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseGraphDump(buffer.str());
}

}  // namespace relgraph
