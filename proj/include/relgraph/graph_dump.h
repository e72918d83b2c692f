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

// Binary affinity dumps. Header (21 bytes, little-endian): "GLG1", u32
// format version, u8 direction, u32 L, u32 n_h, u32 T. Payload: f32 values
// ordered [layer][head][column t][row j], so each column is contiguous.

#ifndef RELGRAPH_GRAPH_DUMP_H_
#define RELGRAPH_GRAPH_DUMP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "relgraph/graph_predictor.h"

namespace relgraph {

inline constexpr std::uint32_t kGraphDumpVersion = 1;
inline constexpr std::size_t kGraphDumpHeaderSize = 21;

struct GraphDump {
  Direction direction = Direction::kForward;
  std::uint32_t layers = 0;
  std::uint32_t heads = 0;
  std::uint32_t length = 0;
  std::vector<float> payload;

  // Weight of source j into target t.
  float at(std::uint32_t layer, std::uint32_t head, std::uint32_t j, std::uint32_t t) const {
    return payload[((static_cast<std::size_t>(layer) * heads + head) * length + t) * length + j];
  }
};

GraphDump DumpFromStack(const AffinityStack& stack);
// Widens back to f64 tensors in the (j, t) row-major layout.
AffinityStack StackFromDump(const GraphDump& dump);

std::string SerializeGraphDump(const GraphDump& dump);
// Throws GraphDumpError on bad magic, unknown version or direction, or a
// payload whose size disagrees with the header.
GraphDump ParseGraphDump(const std::string& bytes);

void WriteGraphDump(const std::string& path, const GraphDump& dump);
GraphDump ReadGraphDump(const std::string& path);

}  // namespace relgraph

#endif  // RELGRAPH_GRAPH_DUMP_H_
