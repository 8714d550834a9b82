// core/include/stt/losses.h

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

#ifndef STT_LOSSES_H_
#define STT_LOSSES_H_

#include <utility>
#include <vector>

#include "stt/alphabet.h"
#include "stt/matrix.h"

namespace stt {

// T' x (U+1) x (V+1) lattice of unnormalized scores. Entry (t, u, k) scores
// emitting class k at lattice node (t, u): k < V is the vertical (emit)
// direction, k == V (blank) the horizontal one.
class JointLogits {
 public:
  JointLogits() = default;
  JointLogits(int num_frames, int num_prefix_rows, int num_classes)
      : frames_(num_frames), rows_(num_prefix_rows), classes_(num_classes),
        data_(static_cast<size_t>(num_frames) * num_prefix_rows * num_classes, 0.0) {
    STT_CHECK(num_frames >= 1 && num_prefix_rows >= 1 && num_classes >= 2,
              "joint logits need at least one frame, one row, two classes");
  }

  int num_frames() const { return frames_; }
  int num_prefix_rows() const { return rows_; }
  int num_classes() const { return classes_; }

  double& at(int t, int u, int k) { return data_[index(t, u, k)]; }
  double at(int t, int u, int k) const { return data_[index(t, u, k)]; }
  std::span<double> node(int t, int u) {
    return {data_.data() + index(t, u, 0), static_cast<size_t>(classes_)};
  }
  std::span<const double> node(int t, int u) const {
    return {data_.data() + index(t, u, 0), static_cast<size_t>(classes_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  size_t index(int t, int u, int k) const {
    return (static_cast<size_t>(t) * rows_ + u) * classes_ + k;
  }
  int frames_ = 0;
  int rows_ = 0;
  int classes_ = 0;
  std::vector<double> data_;
};

// Negative log-likelihood in nats plus the exact gradient with respect to
// the unnormalized input logits.
struct MatrixLoss {
  double loss = 0.0;
  RealMatrix grad;
};

struct JointLoss {
  double loss = 0.0;
  JointLogits grad;
};

// ---------------------------------------------------------------------------
// CTC

// Frame logits: T' x (V+1), blank last. Marginalizes every frame-level path
// that collapses to `labels` (drop repeats, then blanks) with the usual
// forward-backward recursion over the blank-interleaved label expansion.
// Throws NoAlignmentError when labels cannot fit in T' frames.
MatrixLoss ctc_loss(const RealMatrix& frame_logits, const LabelSeq& labels);

// Fewest frames any valid path needs: U plus one separator per repeated pair.
int ctc_min_alignment_frames(const LabelSeq& labels);

// Literal enumeration of all (V+1)^T' paths; the test oracle for ctc_loss.
// Guarded to T' <= 8, V <= 4.
double brute_force_ctc_loss(const RealMatrix& frame_logits, const LabelSeq& labels);

// ---------------------------------------------------------------------------
// Transducer

// Marginalizes all monotone lattice paths from (0,0) to (T'-1,U) that end
// with the mandatory final blank. joint must have exactly U+1 prefix rows.
JointLoss rnnt_loss(const JointLogits& joint, const LabelSeq& labels);

// entry(t,u,.) = frame_proj[t] + prefix_proj[u]; dimensions must agree.
JointLogits joint_combine(const RealMatrix& frame_proj, const RealMatrix& prefix_proj);

// Enumerates every monotone lattice path. Guarded to T' <= 8, U <= 5.
double brute_force_rnnt_loss(const JointLogits& joint, const LabelSeq& labels);

// ---------------------------------------------------------------------------
// Attention

// step_logits: (U+1) x (V+2); row u scores the prediction of labels[u] given
// the teacher-forced prefix, the final row scores eos. Per-row softmax
// cross-entropy; gradient rows are softmax minus one-hot.
MatrixLoss attention_nll(const RealMatrix& step_logits, const LabelSeq& labels);

// ---------------------------------------------------------------------------
// Best alignments (Viterbi)

// Max-probability frame labelling, one class per frame. Tie-breaking prefers
// advancing through the expanded label as early as possible.
struct CtcAlignment {
  std::vector<int> frame_labels;  // length T', entries in [0, V]
  std::vector<int> state_path;    // expanded-label state per frame, length T'
  double log_prob = 0.0;
};
CtcAlignment ctc_best_alignment(const RealMatrix& frame_logits, const LabelSeq& labels);

// Max-probability monotone staircase through the lattice; exactly T'+U nodes
// from (0,0) to (T'-1,U). Ties prefer the vertical (emit) transition.
struct RnntAlignment {
  std::vector<std::pair<int, int>> nodes;  // (t, u)
  double log_prob = 0.0;
};
RnntAlignment rnnt_best_alignment(const JointLogits& joint, const LabelSeq& labels);

// Pass-through validation for attention weights: every row must sum to
// 1 +/- 1e-6.
const RealMatrix& validate_attention_rows(const RealMatrix& attention_rows);

// ---------------------------------------------------------------------------
// Posteriors (alignment heatmaps)

// (2U+1) x T' state occupancy from the CTC forward-backward pass.
RealMatrix ctc_state_posteriors(const RealMatrix& frame_logits, const LabelSeq& labels);

// (U+1) x T' node occupancy from the transducer forward-backward pass.
RealMatrix rnnt_node_posteriors(const JointLogits& joint, const LabelSeq& labels);

}  // namespace stt

#endif  // STT_LOSSES_H_
