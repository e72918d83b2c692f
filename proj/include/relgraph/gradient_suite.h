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

// Finite-difference checks of the main differentiable components on a tiny
// configuration, shared by the CLI and the tests.

#ifndef RELGRAPH_GRADIENT_SUITE_H_
#define RELGRAPH_GRADIENT_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "relgraph/config.h"
#include "relgraph/gradcheck.h"

namespace relgraph {

struct GradientSuiteOptions {
  ModelConfig model;  // vocab, dims, L, n_h, D
  std::size_t length = 5;
  std::uint64_t seed = 1;
  // Parameters are re-drawn uniformly in [-scale, scale]; at the default
  // initialization many gradients fall below what f64 central differences
  // can resolve.
  double scale = 1.5;
  double step = 1e-4;
  double tolerance = 1e-4;
};

// The tiny configuration: V=8, T=5, L=1, n_h=1, every width 8, D=2.
GradientSuiteOptions TinyGradientSuite();

struct GradientSuiteEntry {
  std::string component;  // affinity_layer, compose_layer, position_nll, fuse, total_loss
  GradCheckReport report;
  std::string worst_parameter;
};

std::vector<GradientSuiteEntry> RunGradientSuite(const GradientSuiteOptions& options);

Json ToJson(const std::vector<GradientSuiteEntry>& entries);

}  // namespace relgraph

#endif  // RELGRAPH_GRADIENT_SUITE_H_
