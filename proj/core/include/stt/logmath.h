// core/include/stt/logmath.h

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

#ifndef STT_LOGMATH_H_
#define STT_LOGMATH_H_

#include <limits>
#include <span>
#include <vector>

namespace stt {

// Log of zero probability. -inf propagates through log_sum_exp as an
// absorbing-at-one-end identity: log_sum_exp(S + {-inf}) == log_sum_exp(S).
constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)), stable under large magnitudes.
double log_sum_exp(double a, double b);
double log_sum_exp(double a, double b, double c);

// log sum_i exp(values[i]) with max-shift. Throws ValidationError("empty
// reduction") on an empty input; returns -inf iff every input is -inf.
double log_sum_exp(std::span<const double> values);

// scores - log sum exp(scores), written into `out` (same length). Shift
// invariant; the exponentials of the result sum to 1. Non-finite inputs
// raise NumericError.
void log_softmax(std::span<const double> scores, std::span<double> out);
std::vector<double> log_softmax(std::span<const double> scores);

}  // namespace stt

#endif  // STT_LOGMATH_H_
