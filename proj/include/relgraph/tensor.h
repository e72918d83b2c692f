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

#ifndef RELGRAPH_TENSOR_H_
#define RELGRAPH_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace relgraph {

using Shape = std::vector<std::size_t>;

std::size_t NumElements(const Shape& shape);
std::string ShapeString(const Shape& shape);

enum class OpKind {
  kLeaf,
  kMatMul,
  kTranspose,
  kAdd,
  kSub,
  kMul,
  kScale,
  kRelu,
  kSquaredRelu,
  kSigmoid,
  kTanh,
  kExp,
  kLog,
  kSumAxis,
  kSumAll,
  kConcat,
  kSlice,
  kCausalConv1d,
  kEmbeddingLookup,
  kSoftmaxAxis,
  kNormalizeColumns,
  kCrossEntropyRows,
};

const char* OpName(OpKind kind);

struct TensorImpl;

// One recorded operation. The backward rule reads the output gradient and
// adds into the gradients of `inputs`.
struct TapeNode {
  OpKind kind = OpKind::kLeaf;
  std::uint64_t sequence = 0;
  std::vector<std::shared_ptr<TensorImpl>> inputs;
  std::function<void(const TensorImpl& out)> backward;
};

struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;
  std::string name;
  std::shared_ptr<TapeNode> node;  // null for leaves

  void EnsureGrad() {
    if (grad.empty()) grad.assign(data.size(), 0.0);
  }
};

// Dense row-major float64 tensor handle. Copies share storage; use Clone()
// for a deep copy.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}

  static Tensor Zeros(Shape shape, bool requires_grad = false);
  static Tensor Full(Shape shape, double value, bool requires_grad = false);
  static Tensor FromData(Shape shape, std::vector<double> values,
                         bool requires_grad = false);
  static Tensor Scalar(double value, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  std::size_t rank() const { return impl_->shape.size(); }
  std::size_t dim(std::size_t axis) const { return impl_->shape.at(axis); }
  std::size_t size() const { return impl_->data.size(); }

  std::span<const double> values() const { return impl_->data; }
  std::span<double> mutable_values() { return impl_->data; }
  double item() const;
  double at(std::size_t i) const { return impl_->data.at(i); }
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const { return impl_->requires_grad; }
  Tensor& set_requires_grad(bool flag);
  bool is_leaf() const { return impl_->node == nullptr; }

  bool has_grad() const { return !impl_->grad.empty(); }
  // Gradient values; zeros when nothing has been accumulated yet.
  std::vector<double> grad() const;
  std::span<double> mutable_grad();
  void ZeroGrad() { impl_->grad.clear(); }

  const std::string& name() const { return impl_->name; }
  Tensor& set_name(std::string name);

  Tensor Clone() const;
  // Same values, no tape history, requires_grad off.
  Tensor Detach() const;

  TapeNode* node() const { return impl_->node.get(); }
  const std::shared_ptr<TensorImpl>& impl() const { return impl_; }

 private:
  std::shared_ptr<TensorImpl> impl_;
};

// Runs reverse-mode accumulation from a scalar output. Leaf gradients
// accumulate additively across calls; intermediate gradients are rebuilt.
// Returns the gradients of every named leaf reachable from `output`.
std::map<std::string, Tensor> ReverseAccumulate(const Tensor& output);

// Internal helper for op implementations: creates the output tensor and
// records a node when any input requires a gradient.
Tensor MakeResult(OpKind kind, Shape shape, std::vector<double> data,
                  std::vector<Tensor> inputs,
                  std::function<void(const TensorImpl& out)> backward);

}  // namespace relgraph

#endif  // RELGRAPH_TENSOR_H_
