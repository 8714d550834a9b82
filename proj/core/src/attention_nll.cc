// core/src/attention_nll.cc

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

#include <cmath>

#include "stt/error.h"
#include "stt/logmath.h"
#include "stt/losses.h"

namespace stt {

MatrixLoss attention_nll(const RealMatrix& step_logits, const LabelSeq& labels) {
  const int num_steps = step_logits.rows();
  const int num_classes = step_logits.cols();
  STT_CHECK(num_classes >= 3, "attention logits need V + 2 classes");
  STT_CHECK(num_steps == static_cast<int>(labels.size()) + 1,
            "attention logits have ", num_steps, " rows, labels need ", labels.size() + 1);
  const int eos = num_classes - 1;
  validate_labels(labels, num_classes - 2);  // no sos/eos targets

  MatrixLoss out;
  out.grad = RealMatrix(num_steps, num_classes);
  std::vector<double> log_probs(num_classes);
  for (int u = 0; u < num_steps; ++u) {
    log_softmax(step_logits.row(u), log_probs);
    const int target = u < static_cast<int>(labels.size()) ? labels[u] : eos;
    out.loss -= log_probs[target];
    for (int k = 0; k < num_classes; ++k) {
      out.grad(u, k) = std::exp(log_probs[k]) - (k == target ? 1.0 : 0.0);
    }
  }
  return out;
}

const RealMatrix& validate_attention_rows(const RealMatrix& attention_rows) {
  for (int u = 0; u < attention_rows.rows(); ++u) {
    double sum = 0.0;
    for (int t = 0; t < attention_rows.cols(); ++t) {
      const double w = attention_rows(u, t);
      STT_CHECK(std::isfinite(w) && w >= 0.0, "attention weight (", u, ",", t, ") invalid");
      sum += w;
    }
    STT_CHECK(std::abs(sum - 1.0) <= 1e-6, "attention row ", u, " sums to ", sum, ", expected 1");
  }
  return attention_rows;
}

}  // namespace stt
