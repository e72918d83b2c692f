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

#ifndef RELGRAPH_HEATMAP_H_
#define RELGRAPH_HEATMAP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "relgraph/graph_dump.h"

namespace relgraph {

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

// Gray level for a weight: 0 -> white (255), 1 -> black (0).
std::uint8_t HeatmapLevel(double value);

// One cell per (source j, target t): rows are j, columns t, each cell
// scale x scale pixels.
Image RenderHeatmap(const GraphDump& dump, std::uint32_t layer, std::uint32_t head, std::uint32_t scale);

std::string EncodePpm(const Image& image);
Image DecodePpm(const std::string& bytes);
void WritePpm(const std::string& path, const Image& image);

}  // namespace relgraph

#endif  // RELGRAPH_HEATMAP_H_
