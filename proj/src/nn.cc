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

#include "relgraph/nn.h"

#include "relgraph/errors.h"
#include "relgraph/ops.h"

namespace relgraph {

Linear Linear::Create(ParameterSet& params, const std::string& prefix, std::size_t in,
                      std::size_t out, Rng& rng) {
  Linear l;
  l.weight = params.AddUniform(prefix + ".w", {in, out}, rng);
  l.bias = params.AddConstant(prefix + ".b", {out}, 0.0);
  return l;
}

Tensor Linear::operator()(const Tensor& x) const { return Add(MatMul(x, weight), bias); }

GruCell GruCell::Create(ParameterSet& params, const std::string& prefix, std::size_t input_dim,
                        std::size_t hidden_dim, Rng& rng) {
  GruCell c;
  c.input_dim = input_dim;
  c.hidden_dim = hidden_dim;
  c.update = Linear::Create(params, prefix + ".update", input_dim + hidden_dim, hidden_dim, rng);
  c.reset = Linear::Create(params, prefix + ".reset", input_dim + hidden_dim, hidden_dim, rng);
  c.candidate = Linear::Create(params, prefix + ".candidate", input_dim + hidden_dim, hidden_dim, rng);
  return c;
}

Tensor GruCell::operator()(const Tensor& x, const Tensor& h) const {
  if (x.rank() != 2 || h.rank() != 2 || x.dim(1) != input_dim || h.dim(1) != hidden_dim ||
      x.dim(0) != h.dim(0)) {
    throw ShapeError("gru_cell: input " + ShapeString(x.shape()) + " state " + ShapeString(h.shape()) +
                     " do not match cell " + std::to_string(input_dim) + "->" + std::to_string(hidden_dim));
  }
  const Tensor xh[] = {x, h};
  Tensor joined = Concat(xh, 1);
  Tensor z = Sigmoid(update(joined));
  Tensor r = Sigmoid(reset(joined));
  const Tensor xrh[] = {x, Mul(r, h)};
  Tensor n = Tanh(candidate(Concat(xrh, 1)));
  return Add(n, Mul(z, Sub(h, n)));
}

}  // namespace relgraph
