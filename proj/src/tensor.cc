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

#include "relgraph/tensor.h"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "relgraph/errors.h"

namespace relgraph {
namespace {

// Creation order within one worker. Tapes never cross threads.
thread_local std::uint64_t next_sequence = 1;

}  // namespace

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ',';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

const char* OpName(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kRelu: return "relu";
    case OpKind::kSquaredRelu: return "squared_relu";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kExp: return "exp";
    case OpKind::kLog: return "log";
    case OpKind::kSumAxis: return "sum_axis";
    case OpKind::kSumAll: return "sum_all";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kCausalConv1d: return "causal_conv1d";
    case OpKind::kEmbeddingLookup: return "embedding_lookup";
    case OpKind::kSoftmaxAxis: return "softmax_axis";
    case OpKind::kNormalizeColumns: return "normalize_columns";
    case OpKind::kCrossEntropyRows: return "cross_entropy_rows";
  }
  return "unknown";
}

Tensor Tensor::Zeros(Shape shape, bool requires_grad) {
  return Full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::Full(Shape shape, double value, bool requires_grad) {
  auto impl = std::make_shared<TensorImpl>();
  impl->data.assign(NumElements(shape), value);
  impl->shape = std::move(shape);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::FromData(Shape shape, std::vector<double> values, bool requires_grad) {
  if (NumElements(shape) != values.size()) {
    throw ShapeError("tensor: shape " + ShapeString(shape) + " needs " +
                     std::to_string(NumElements(shape)) + " values, got " +
                     std::to_string(values.size()));
  }
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(values);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::Scalar(double value, bool requires_grad) {
  return FromData({}, {value}, requires_grad);
}

double Tensor::item() const {
  if (size() != 1) {
    throw ShapeError("item: tensor of shape " + ShapeString(shape()) + " is not a scalar");
  }
  return impl_->data[0];
}

double Tensor::at(std::size_t row, std::size_t col) const {
  if (rank() != 2 || row >= dim(0) || col >= dim(1)) {
    throw ShapeError("at: index (" + std::to_string(row) + "," + std::to_string(col) +
                     ") outside " + ShapeString(shape()));
  }
  return impl_->data[row * dim(1) + col];
}

Tensor& Tensor::set_requires_grad(bool flag) {
  impl_->requires_grad = flag;
  return *this;
}

std::vector<double> Tensor::grad() const {
  if (impl_->grad.empty()) return std::vector<double>(size(), 0.0);
  return impl_->grad;
}

std::span<double> Tensor::mutable_grad() {
  impl_->EnsureGrad();
  return impl_->grad;
}

Tensor& Tensor::set_name(std::string name) {
  impl_->name = std::move(name);
  return *this;
}

Tensor Tensor::Clone() const {
  auto impl = std::make_shared<TensorImpl>(*impl_);
  impl->node.reset();
  return Tensor(std::move(impl));
}

Tensor Tensor::Detach() const {
  return FromData(shape(), impl_->data, false);
}

Tensor MakeResult(OpKind kind, Shape shape, std::vector<double> data,
                  std::vector<Tensor> inputs,
                  std::function<void(const TensorImpl& out)> backward) {
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(data);
  bool record = std::any_of(inputs.begin(), inputs.end(),
                            [](const Tensor& t) { return t.requires_grad(); });
  if (record) {
    impl->requires_grad = true;
    auto node = std::make_shared<TapeNode>();
    node->kind = kind;
    node->sequence = next_sequence++;
    node->inputs.reserve(inputs.size());
    for (const Tensor& t : inputs) node->inputs.push_back(t.impl());
    node->backward = std::move(backward);
    impl->node = std::move(node);
  }
  return Tensor(std::move(impl));
}

std::map<std::string, Tensor> ReverseAccumulate(const Tensor& output) {
  if (!output.defined() || output.size() != 1) {
    throw ShapeError("reverse_accumulate: output must be a scalar, got shape " +
                     (output.defined() ? ShapeString(output.shape()) : std::string("<undefined>")));
  }
  std::map<std::string, Tensor> named;
  if (!output.requires_grad()) return named;
  if (output.is_leaf()) {
    output.impl()->EnsureGrad();
    output.impl()->grad[0] += 1.0;
    if (!output.name().empty()) named.emplace(output.name(), Tensor::FromData(output.shape(), output.impl()->grad));
    return named;
  }

  // Collect every recorded tensor reachable from the output.
  std::vector<TensorImpl*> interior;
  std::vector<std::shared_ptr<TensorImpl>> leaves;
  std::unordered_set<const TensorImpl*> seen;
  std::vector<TensorImpl*> stack{output.impl().get()};
  seen.insert(output.impl().get());
  while (!stack.empty()) {
    TensorImpl* cur = stack.back();
    stack.pop_back();
    interior.push_back(cur);
    for (const auto& in : cur->node->inputs) {
      if (!in->requires_grad || !seen.insert(in.get()).second) continue;
      if (in->node) {
        stack.push_back(in.get());
      } else {
        leaves.push_back(in);
      }
    }
  }
  // Creation order is a topological order; walk it backwards.
  std::sort(interior.begin(), interior.end(), [](const TensorImpl* a, const TensorImpl* b) {
    return a->node->sequence > b->node->sequence;
  });
  for (TensorImpl* t : interior) t->grad.assign(t->data.size(), 0.0);
  output.impl()->grad[0] = 1.0;
  for (TensorImpl* t : interior) t->node->backward(*t);
  for (TensorImpl* t : interior) {
    if (t != output.impl().get()) std::vector<double>().swap(t->grad);
  }

  for (const auto& leaf : leaves) {
    if (!leaf->name.empty()) named.emplace(leaf->name, Tensor::FromData(leaf->shape, leaf->grad));
  }
  return named;
}

}  // namespace relgraph
