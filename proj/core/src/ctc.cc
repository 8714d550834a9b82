// core/src/ctc.cc

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
#include <string>

#include "stt/error.h"
#include "stt/logmath.h"
#include "stt/losses.h"

namespace stt {

void validate_labels(const LabelSeq& labels, int num_symbols) {
  for (int id : labels) {
    STT_CHECK(id >= 0 && id < num_symbols,
              "label id ", id, " outside alphabet of size ", num_symbols);
  }
}

int ctc_min_alignment_frames(const LabelSeq& labels) {
  int frames = static_cast<int>(labels.size());
  for (size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] == labels[i - 1]) ++frames;  // separating blank
  }
  return frames;
}

namespace {

// Blank-interleaved expansion: blank, y1, blank, y2, ..., yU, blank.
std::vector<int> expand_with_blanks(const LabelSeq& labels, int blank) {
  std::vector<int> expanded(2 * labels.size() + 1, blank);
  for (size_t i = 0; i < labels.size(); ++i) expanded[2 * i + 1] = labels[i];
  return expanded;
}

// A state s may be entered from s-2 only when it is a symbol different from
// the symbol two states back (otherwise the blank between them is mandatory).
bool skip_allowed(const std::vector<int>& expanded, int s, int blank) {
  return s >= 2 && expanded[s] != blank && expanded[s] != expanded[s - 2];
}

struct CtcTables {
  int num_frames = 0;
  int num_states = 0;
  std::vector<int> expanded;
  RealMatrix log_probs;  // T x (V+1)
  RealMatrix log_alpha;  // T x S
  RealMatrix log_beta;   // T x S, includes the emission at t
  double log_like = kLogZero;
};

void validate_ctc_inputs(const RealMatrix& frame_logits, const LabelSeq& labels) {
  STT_CHECK(frame_logits.rows() >= 1, "frame logits need at least one frame");
  STT_CHECK(frame_logits.cols() >= 2, "frame logits need at least two classes");
  validate_labels(labels, frame_logits.cols() - 1);
  for (double v : frame_logits.data()) {
    if (!std::isfinite(v)) throw NumericError("frame logits contain a non-finite value");
  }
  const int min_frames = ctc_min_alignment_frames(labels);
  if (frame_logits.rows() < min_frames) {
    throw NoAlignmentError(msg_cat("no alignment: ", labels.size(), " labels need at least ",
                                   min_frames, " frames, got ", frame_logits.rows()));
  }
}

CtcTables ctc_forward_backward(const RealMatrix& frame_logits, const LabelSeq& labels) {
  const int num_frames = frame_logits.rows();
  const int blank = frame_logits.cols() - 1;

  CtcTables tab;
  tab.num_frames = num_frames;
  tab.expanded = expand_with_blanks(labels, blank);
  tab.num_states = static_cast<int>(tab.expanded.size());
  const int S = tab.num_states;

  tab.log_probs = RealMatrix(num_frames, frame_logits.cols());
  for (int t = 0; t < num_frames; ++t) log_softmax(frame_logits.row(t), tab.log_probs.row(t));

  tab.log_alpha = RealMatrix(num_frames, S, kLogZero);
  tab.log_alpha(0, 0) = tab.log_probs(0, tab.expanded[0]);
  if (S > 1) tab.log_alpha(0, 1) = tab.log_probs(0, tab.expanded[1]);
  for (int t = 1; t < num_frames; ++t) {
    for (int s = 0; s < S; ++s) {
      double acc = tab.log_alpha(t - 1, s);
      if (s >= 1) acc = log_sum_exp(acc, tab.log_alpha(t - 1, s - 1));
      if (skip_allowed(tab.expanded, s, blank)) {
        acc = log_sum_exp(acc, tab.log_alpha(t - 1, s - 2));
      }
      tab.log_alpha(t, s) = acc + tab.log_probs(t, tab.expanded[s]);
    }
  }
  tab.log_like = tab.log_alpha(num_frames - 1, S - 1);
  if (S > 1) tab.log_like = log_sum_exp(tab.log_like, tab.log_alpha(num_frames - 1, S - 2));

  tab.log_beta = RealMatrix(num_frames, S, kLogZero);
  tab.log_beta(num_frames - 1, S - 1) = tab.log_probs(num_frames - 1, tab.expanded[S - 1]);
  if (S > 1) {
    tab.log_beta(num_frames - 1, S - 2) = tab.log_probs(num_frames - 1, tab.expanded[S - 2]);
  }
  for (int t = num_frames - 2; t >= 0; --t) {
    for (int s = S - 1; s >= 0; --s) {
      double acc = tab.log_beta(t + 1, s);
      if (s + 1 < S) acc = log_sum_exp(acc, tab.log_beta(t + 1, s + 1));
      if (s + 2 < S && skip_allowed(tab.expanded, s + 2, blank)) {
        acc = log_sum_exp(acc, tab.log_beta(t + 1, s + 2));
      }
      tab.log_beta(t, s) = acc + tab.log_probs(t, tab.expanded[s]);
    }
  }
  return tab;
}

}  // namespace

MatrixLoss ctc_loss(const RealMatrix& frame_logits, const LabelSeq& labels) {
  validate_ctc_inputs(frame_logits, labels);
  const CtcTables tab = ctc_forward_backward(frame_logits, labels);
  if (tab.log_like == kLogZero) {
    throw NoAlignmentError("no alignment: zero total path probability");
  }

  MatrixLoss out;
  out.loss = -tab.log_like;
  out.grad = RealMatrix(frame_logits.rows(), frame_logits.cols());
  for (int t = 0; t < tab.num_frames; ++t) {
    // Posterior mass per class: sum over expanded states carrying that class.
    std::vector<double> occupancy(frame_logits.cols(), 0.0);
    for (int s = 0; s < tab.num_states; ++s) {
      const int k = tab.expanded[s];
      const double joint =
          tab.log_alpha(t, s) + tab.log_beta(t, s) - tab.log_probs(t, k) - tab.log_like;
      if (joint != kLogZero) occupancy[k] += std::exp(joint);
    }
    for (int k = 0; k < frame_logits.cols(); ++k) {
      out.grad(t, k) = std::exp(tab.log_probs(t, k)) - occupancy[k];
    }
  }
  return out;
}

RealMatrix ctc_state_posteriors(const RealMatrix& frame_logits, const LabelSeq& labels) {
  validate_ctc_inputs(frame_logits, labels);
  const CtcTables tab = ctc_forward_backward(frame_logits, labels);
  RealMatrix post(tab.num_states, tab.num_frames);
  for (int t = 0; t < tab.num_frames; ++t) {
    for (int s = 0; s < tab.num_states; ++s) {
      const double joint = tab.log_alpha(t, s) + tab.log_beta(t, s) -
                           tab.log_probs(t, tab.expanded[s]) - tab.log_like;
      post(s, t) = joint == kLogZero ? 0.0 : std::exp(joint);
    }
  }
  return post;
}

CtcAlignment ctc_best_alignment(const RealMatrix& frame_logits, const LabelSeq& labels) {
  validate_ctc_inputs(frame_logits, labels);
  const int num_frames = frame_logits.rows();
  const int blank = frame_logits.cols() - 1;
  const std::vector<int> expanded = expand_with_blanks(labels, blank);
  const int S = static_cast<int>(expanded.size());

  RealMatrix log_probs(num_frames, frame_logits.cols());
  for (int t = 0; t < num_frames; ++t) log_softmax(frame_logits.row(t), log_probs.row(t));

  // Best completion score from (t, s); reconstruction then runs forward so
  // ties can prefer the transition that advances (emits) earliest.
  RealMatrix best(num_frames, S, kLogZero);
  best(num_frames - 1, S - 1) = log_probs(num_frames - 1, expanded[S - 1]);
  if (S > 1) best(num_frames - 1, S - 2) = log_probs(num_frames - 1, expanded[S - 2]);
  for (int t = num_frames - 2; t >= 0; --t) {
    for (int s = 0; s < S; ++s) {
      double b = best(t + 1, s);
      if (s + 1 < S && best(t + 1, s + 1) > b) b = best(t + 1, s + 1);
      if (s + 2 < S && skip_allowed(expanded, s + 2, blank) && best(t + 1, s + 2) > b) {
        b = best(t + 1, s + 2);
      }
      best(t, s) = b == kLogZero ? kLogZero : b + log_probs(t, expanded[s]);
    }
  }

  int state = 0;
  if (S > 1 && best(0, 1) >= best(0, 0)) state = 1;  // tie: emit first symbol now
  if (best(0, state) == kLogZero) {
    throw NoAlignmentError("no alignment: empty Viterbi search space");
  }

  CtcAlignment out;
  out.log_prob = best(0, state);
  out.frame_labels.reserve(num_frames);
  out.state_path.reserve(num_frames);
  for (int t = 0;; ++t) {
    out.frame_labels.push_back(expanded[state]);
    out.state_path.push_back(state);
    if (t == num_frames - 1) break;
    // Candidates in tie-preference order: larger advance first.
    int next = state;
    double next_score = kLogZero;
    if (state + 2 < S && skip_allowed(expanded, state + 2, blank)) {
      next = state + 2;
      next_score = best(t + 1, state + 2);
    }
    if (state + 1 < S && best(t + 1, state + 1) > next_score) {
      next = state + 1;
      next_score = best(t + 1, state + 1);
    }
    if (best(t + 1, state) > next_score) {
      next = state;
      next_score = best(t + 1, state);
    }
    if (next_score == kLogZero) {
      throw NoAlignmentError("no alignment: dead end in Viterbi reconstruction");
    }
    state = next;
  }
  return out;
}

double brute_force_ctc_loss(const RealMatrix& frame_logits, const LabelSeq& labels) {
  const int num_frames = frame_logits.rows();
  const int num_classes = frame_logits.cols();
  STT_CHECK(num_frames >= 1 && num_frames <= 8, "brute force guard: T' must be in [1, 8]");
  STT_CHECK(num_classes >= 2 && num_classes - 1 <= 4, "brute force guard: V must be in [1, 4]");
  validate_labels(labels, num_classes - 1);
  const int blank = num_classes - 1;

  RealMatrix log_probs(num_frames, num_classes);
  for (int t = 0; t < num_frames; ++t) log_softmax(frame_logits.row(t), log_probs.row(t));

  std::vector<int> path(num_frames, 0);
  double total = kLogZero;
  bool found = false;
  for (;;) {
    // Collapse: drop repeats, then blanks.
    LabelSeq collapsed;
    for (int t = 0; t < num_frames; ++t) {
      if (path[t] != blank && (t == 0 || path[t] != path[t - 1])) collapsed.push_back(path[t]);
    }
    if (collapsed == labels) {
      double lp = 0.0;
      for (int t = 0; t < num_frames; ++t) lp += log_probs(t, path[t]);
      total = log_sum_exp(total, lp);
      found = true;
    }
    int pos = num_frames - 1;
    while (pos >= 0 && path[pos] == num_classes - 1) path[pos--] = 0;
    if (pos < 0) break;
    ++path[pos];
  }
  if (!found) throw NoAlignmentError("no alignment: enumeration found no matching path");
  return -total;
}

}  // namespace stt
