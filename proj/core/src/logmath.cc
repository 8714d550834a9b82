// core/src/logmath.cc

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

#include "stt/logmath.h"

#include <cmath>

#include "stt/error.h"

namespace stt {

double log_sum_exp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(double a, double b, double c) {
  return log_sum_exp(log_sum_exp(a, b), c);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw ValidationError("empty reduction");
  double hi = kLogZero;
  for (double v : values) {
    if (v > hi) hi = v;
  }
  if (hi == kLogZero) return kLogZero;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

void log_softmax(std::span<const double> scores, std::span<double> out) {
  if (scores.empty()) throw ValidationError("empty reduction");
  STT_CHECK(scores.size() == out.size(), "log_softmax: size mismatch");
  double hi = scores[0];
  for (double v : scores) {
    if (!std::isfinite(v)) {
      throw NumericError(msg_cat("log_softmax: non-finite score ", v));
    }
    if (v > hi) hi = v;
  }
  double acc = 0.0;
  for (double v : scores) acc += std::exp(v - hi);
  const double norm = hi + std::log(acc);
  for (size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] - norm;
}

std::vector<double> log_softmax(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  log_softmax(scores, out);
  return out;
}

}  // namespace stt
