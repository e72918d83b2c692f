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

#include "relgraph/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relgraph {

GradCheckReport FiniteDifferenceCheck(const std::function<Tensor()>& fn, std::vector<Tensor> params,
                                      double step, double tolerance) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_difference_check: step must be positive");
  GradCheckReport report;
  auto fail_non_finite = [&](std::size_t p, std::size_t i, const char* what) {
    report.pass = false;
    report.worst_param = p;
    report.worst_index = i;
    std::ostringstream msg;
    msg << "non-finite " << what << " at param " << p;
    if (!params[p].name().empty()) msg << " (" << params[p].name() << ")";
    msg << " index " << i;
    report.message = msg.str();
    return report;
  };

  for (Tensor& p : params) p.ZeroGrad();
  Tensor out = fn();
  if (!std::isfinite(out.item())) return fail_non_finite(0, 0, "output");
  ReverseAccumulate(out);

  for (std::size_t p = 0; p < params.size(); ++p) {
    const std::vector<double> analytic = params[p].grad();
    auto values = params[p].mutable_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double original = values[i];
      values[i] = original + step;
      const double up = fn().item();
      values[i] = original - step;
      const double down = fn().item();
      values[i] = original;
      if (!std::isfinite(up) || !std::isfinite(down)) return fail_non_finite(p, i, "loss");
      if (!std::isfinite(analytic[i])) return fail_non_finite(p, i, "gradient");
      const double numeric = (up - down) / (2.0 * step);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
      const double rel = std::abs(analytic[i] - numeric) / denom;
      ++report.checked;
      if (rel > report.max_rel_error || report.checked == 1) {
        report.max_rel_error = rel;
        report.worst_param = p;
        report.worst_index = i;
        report.analytic = analytic[i];
        report.numeric = numeric;
      }
    }
  }
  report.pass = report.max_rel_error <= tolerance;
  std::ostringstream msg;
  msg << (report.pass ? "pass" : "fail") << ": max relative error " << report.max_rel_error << " over "
      << report.checked << " coordinates";
  if (!report.pass) {
    msg << "; worst at param " << report.worst_param;
    if (!params[report.worst_param].name().empty()) msg << " (" << params[report.worst_param].name() << ")";
    msg << " index " << report.worst_index << " analytic " << report.analytic << " numeric " << report.numeric;
  }
  report.message = msg.str();
  return report;
}

}  // namespace relgraph
