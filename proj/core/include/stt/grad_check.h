// core/include/stt/grad_check.h

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

#ifndef STT_GRAD_CHECK_H_
#define STT_GRAD_CHECK_H_

#include <functional>
#include <span>
#include <vector>

namespace stt {

// Central-difference gradient oracle: (f(x + h e_i) - f(x - h e_i)) / 2h per
// coordinate. Every analytic backward pass in this toolkit is verified
// against it; it only ever evaluates f, never the code under test.
// A non-finite evaluation raises NumericError naming the coordinate.
std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double step = 1e-5);

// max_i |analytic_i - numeric_i| / max(1, |analytic_i|)
double max_rel_error(std::span<const double> analytic, std::span<const double> numeric);

}  // namespace stt

#endif  // STT_GRAD_CHECK_H_
