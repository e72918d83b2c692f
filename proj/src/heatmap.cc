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

#include "relgraph/heatmap.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "relgraph/errors.h"

namespace relgraph {

std::uint8_t HeatmapLevel(double value) {
  const double v = std::clamp(std::isfinite(value) ? value : 0.0, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - v)));
}

Image RenderHeatmap(const GraphDump& dump, std::uint32_t layer, std::uint32_t head, std::uint32_t scale) {
  if (layer >= dump.layers) {
    throw ValidationError("render_heatmap: layer " + std::to_string(layer) + " out of range (L=" +
                          std::to_string(dump.layers) + ")");
  }
  if (head >= dump.heads) {
    throw ValidationError("render_heatmap: head " + std::to_string(head) + " out of range (n_h=" +
                          std::to_string(dump.heads) + ")");
  }
  if (scale < 1) throw ValidationError("render_heatmap: scale must be at least 1");
  Image img;
  img.width = img.height = static_cast<std::size_t>(dump.length) * scale;
  img.rgb.assign(img.width * img.height * 3, 255);
  for (std::uint32_t j = 0; j < dump.length; ++j) {
    for (std::uint32_t t = 0; t < dump.length; ++t) {
      const std::uint8_t level = HeatmapLevel(dump.at(layer, head, j, t));
      for (std::uint32_t dy = 0; dy < scale; ++dy) {
        std::uint8_t* px = img.rgb.data() + ((j * scale + dy) * img.width + t * scale) * 3;
        std::fill(px, px + 3 * scale, level);
      }
    }
  }
  return img;
}

std::string EncodePpm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
  return out;
}

Image DecodePpm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  std::size_t w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (!in || magic != "P6" || maxval != 255) throw ValidationError("ppm: expected a binary P6 header with maxval 255");
  in.get();
  Image img;
  img.width = w;
  img.height = h;
  img.rgb.resize(w * h * 3);
  in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.rgb.size()) throw ValidationError("ppm: pixel data truncated");
  return img;
}

void WritePpm(const std::string& path, const Image& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("ppm: cannot open '" + path + "' for writing");
  const std::string bytes = EncodePpm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace relgraph
