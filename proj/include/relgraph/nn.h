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

// Small building blocks shared by the pretraining and downstream networks.

#ifndef RELGRAPH_NN_H_
#define RELGRAPH_NN_H_

#include <string>

#include "relgraph/params.h"
#include "relgraph/tensor.h"

namespace relgraph {

struct Linear {
  Tensor weight;  // [in, out]
  Tensor bias;    // [out]

  static Linear Create(ParameterSet& params, const std::string& prefix, std::size_t in,
                       std::size_t out, Rng& rng);
  // x: [N, in] -> [N, out]
  Tensor operator()(const Tensor& x) const;
};

// Gated recurrent cell over row batches:
//   z = sigmoid([x; h] Wz + bz), r = sigmoid([x; h] Wr + br)
//   n = tanh([x; r * h] Wn + bn), h' = (1 - z) * n + z * h
struct GruCell {
  Linear update;
  Linear reset;
  Linear candidate;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;

  static GruCell Create(ParameterSet& params, const std::string& prefix, std::size_t input_dim,
                        std::size_t hidden_dim, Rng& rng);
  // x: [N, input_dim], h: [N, hidden_dim] -> [N, hidden_dim]
  Tensor operator()(const Tensor& x, const Tensor& h) const;
};

}  // namespace relgraph

#endif  // RELGRAPH_NN_H_
