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

#include "relgraph/params.h"

#include <cmath>
#include <stdexcept>

namespace relgraph {

Tensor ParameterSet::Register(const std::string& name, Tensor t) {
  if (index_.count(name)) throw std::logic_error("parameter '" + name + "' registered twice");
  t.set_name(name).set_requires_grad(true);
  index_.emplace(name, tensors_.size());
  tensors_.push_back(t);
  return t;
}

Tensor ParameterSet::AddUniform(const std::string& name, Shape shape, Rng& rng) {
  const double fan_in = static_cast<double>(shape.empty() ? 1 : shape[0]);
  const double s = 1.0 / std::sqrt(fan_in);
  std::uniform_real_distribution<double> dist(-s, s);
  std::vector<double> v(NumElements(shape));
  for (double& x : v) x = dist(rng);
  return Register(name, Tensor::FromData(std::move(shape), std::move(v)));
}

Tensor ParameterSet::AddNormal(const std::string& name, Shape shape, double stddev, Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  std::vector<double> v(NumElements(shape));
  for (double& x : v) x = dist(rng);
  return Register(name, Tensor::FromData(std::move(shape), std::move(v)));
}

Tensor ParameterSet::AddConstant(const std::string& name, Shape shape, double value) {
  return Register(name, Tensor::Full(std::move(shape), value));
}

const Tensor& ParameterSet::Get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no parameter named '" + name + "'");
  return tensors_[it->second];
}

void ParameterSet::Append(const ParameterSet& other) {
  for (const Tensor& t : other.tensors_) {
    if (index_.count(t.name())) throw std::logic_error("parameter '" + t.name() + "' registered twice");
    index_.emplace(t.name(), tensors_.size());
    tensors_.push_back(t);
  }
}

void ParameterSet::SetRequiresGrad(bool flag) {
  for (Tensor& t : tensors_) t.set_requires_grad(flag);
}

void ParameterSet::ZeroGrad() {
  for (Tensor& t : tensors_) t.ZeroGrad();
}

double ParameterSet::GradSquaredNorm() const {
  double total = 0.0;
  for (const Tensor& t : tensors_) {
    if (!t.has_grad()) continue;
    for (double g : t.grad()) total += g * g;
  }
  return total;
}

}  // namespace relgraph
