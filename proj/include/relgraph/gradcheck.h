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

#ifndef RELGRAPH_GRADCHECK_H_
#define RELGRAPH_GRADCHECK_H_

#include <functional>
#include <string>
#include <vector>

#include "relgraph/tensor.h"

namespace relgraph {

struct GradCheckReport {
  bool pass = true;
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  // Location of the worst coordinate (or of the first non-finite value).
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::string message;
};

// Compares reverse-mode gradients of the scalar program `fn` against
// central differences, one parameter coordinate at a time. Relative error is
// |a - n| / max(|a|, |n|, 1e-8). Parameters are restored bit-exactly.
GradCheckReport FiniteDifferenceCheck(const std::function<Tensor()>& fn,
                                      std::vector<Tensor> params, double step,
                                      double tolerance);

}  // namespace relgraph

#endif  // RELGRAPH_GRADCHECK_H_
