// core/src/grad_check.cc

// Copyright 2026  The STT Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "stt/grad_check.h"

#include <cmath>

#include "stt/error.h"

namespace stt {

std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double step) {
  STT_CHECK(step > 0.0, "finite_diff_grad: step must be positive");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (size_t i = 0; i < point.size(); ++i) {
    const double saved = point[i];
    point[i] = saved + step;
    const double hi = f(point);
    point[i] = saved - step;
    const double lo = f(point);
    point[i] = saved;
    if (!std::isfinite(hi) || !std::isfinite(lo)) {
      throw NumericError(msg_cat("finite_diff_grad: non-finite evaluation at coordinate ", i));
    }
    grad[i] = (hi - lo) / (2.0 * step);
  }
  return grad;
}

double max_rel_error(std::span<const double> analytic, std::span<const double> numeric) {
  STT_CHECK(analytic.size() == numeric.size(), "max_rel_error: size mismatch");
  double worst = 0.0;
  for (size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max(1.0, std::abs(analytic[i]));
    const double err = std::abs(analytic[i] - numeric[i]) / denom;
    if (err > worst) worst = err;
  }
  return worst;
}

}  // namespace stt
