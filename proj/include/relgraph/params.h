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

#ifndef RELGRAPH_PARAMS_H_
#define RELGRAPH_PARAMS_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "relgraph/tensor.h"

namespace relgraph {

using Rng = std::mt19937_64;

// Ordered collection of named trainable tensors. Registration order is the
// serialization and optimizer order.
class ParameterSet {
 public:
  // Uniform in [-s, s] with s = fan_in^{-1/2}, fan_in = shape[0].
  Tensor AddUniform(const std::string& name, Shape shape, Rng& rng);
  // Zero-mean Gaussian.
  Tensor AddNormal(const std::string& name, Shape shape, double stddev, Rng& rng);
  Tensor AddConstant(const std::string& name, Shape shape, double value);

  const Tensor& Get(const std::string& name) const;
  bool Contains(const std::string& name) const { return index_.count(name) != 0; }
  const std::vector<Tensor>& tensors() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }

  void Append(const ParameterSet& other);
  void SetRequiresGrad(bool flag);
  void ZeroGrad();
  // Sum of squared gradient entries.
  double GradSquaredNorm() const;

 private:
  Tensor Register(const std::string& name, Tensor t);

  std::vector<Tensor> tensors_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace relgraph

#endif  // RELGRAPH_PARAMS_H_
