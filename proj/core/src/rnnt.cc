// core/src/rnnt.cc

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

namespace {

struct RnntTables {
  int num_frames = 0;
  int num_rows = 0;  // U + 1
  std::vector<RealMatrix> log_probs;  // per frame: (U+1) x (V+1)
  RealMatrix log_alpha;  // T' x (U+1)
  RealMatrix log_beta;   // T' x (U+1), best-completion marginal from each node
  double log_like = kLogZero;

  double lp(int t, int u, int k) const { return log_probs[t](u, k); }
};

void validate_rnnt_inputs(const JointLogits& joint, const LabelSeq& labels) {
  STT_CHECK(joint.num_prefix_rows() == static_cast<int>(labels.size()) + 1,
            "joint has ", joint.num_prefix_rows(), " prefix rows, labels need ",
            labels.size() + 1);
  validate_labels(labels, joint.num_classes() - 1);
  for (double v : joint.data()) {
    if (!std::isfinite(v)) throw NumericError("joint logits contain a non-finite value");
  }
}

RnntTables rnnt_forward_backward(const JointLogits& joint, const LabelSeq& labels) {
  const int T = joint.num_frames();
  const int rows = joint.num_prefix_rows();
  const int U = rows - 1;
  const int blank = joint.num_classes() - 1;

  RnntTables tab;
  tab.num_frames = T;
  tab.num_rows = rows;
  tab.log_probs.reserve(T);
  for (int t = 0; t < T; ++t) {
    RealMatrix m(rows, joint.num_classes());
    for (int u = 0; u < rows; ++u) log_softmax(joint.node(t, u), m.row(u));
    tab.log_probs.push_back(std::move(m));
  }

  // A horizontal step (t,u) -> (t+1,u) consumes blank, a vertical step
  // (t,u) -> (t,u+1) consumes labels[u]; the path ends with the blank at
  // (T-1, U).
  tab.log_alpha = RealMatrix(T, rows, kLogZero);
  tab.log_alpha(0, 0) = 0.0;
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u < rows; ++u) {
      if (t == 0 && u == 0) continue;
      double acc = kLogZero;
      if (t > 0) acc = tab.log_alpha(t - 1, u) + tab.lp(t - 1, u, blank);
      if (u > 0) acc = log_sum_exp(acc, tab.log_alpha(t, u - 1) + tab.lp(t, u - 1, labels[u - 1]));
      tab.log_alpha(t, u) = acc;
    }
  }
  tab.log_like = tab.log_alpha(T - 1, U) + tab.lp(T - 1, U, blank);

  tab.log_beta = RealMatrix(T, rows, kLogZero);
  tab.log_beta(T - 1, U) = tab.lp(T - 1, U, blank);
  for (int t = T - 1; t >= 0; --t) {
    for (int u = U; u >= 0; --u) {
      if (t == T - 1 && u == U) continue;
      double acc = kLogZero;
      if (t + 1 < T) acc = tab.lp(t, u, blank) + tab.log_beta(t + 1, u);
      if (u < U) acc = log_sum_exp(acc, tab.lp(t, u, labels[u]) + tab.log_beta(t, u + 1));
      tab.log_beta(t, u) = acc;
    }
  }
  return tab;
}

}  // namespace

JointLoss rnnt_loss(const JointLogits& joint, const LabelSeq& labels) {
  validate_rnnt_inputs(joint, labels);
  const RnntTables tab = rnnt_forward_backward(joint, labels);
  const int T = joint.num_frames();
  const int U = joint.num_prefix_rows() - 1;
  const int num_classes = joint.num_classes();
  const int blank = num_classes - 1;

  JointLoss out;
  out.loss = -tab.log_like;
  out.grad = JointLogits(T, U + 1, num_classes);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      // Every visit to a node takes exactly one outgoing transition, so node
      // occupancy equals the sum of its transition posteriors.
      const double node = tab.log_alpha(t, u) + tab.log_beta(t, u) - tab.log_like;
      const double occupancy = node == kLogZero ? 0.0 : std::exp(node);
      double post_blank = 0.0;
      if (t + 1 < T) {
        const double lg =
            tab.log_alpha(t, u) + tab.lp(t, u, blank) + tab.log_beta(t + 1, u) - tab.log_like;
        if (lg != kLogZero) post_blank = std::exp(lg);
      } else if (u == U) {
        post_blank = occupancy;  // mandatory final blank
      }
      double post_emit = 0.0;
      if (u < U) {
        const double lg = tab.log_alpha(t, u) + tab.lp(t, u, labels[u]) +
                          tab.log_beta(t, u + 1) - tab.log_like;
        if (lg != kLogZero) post_emit = std::exp(lg);
      }
      for (int k = 0; k < num_classes; ++k) {
        double g = occupancy * std::exp(tab.lp(t, u, k));
        if (k == blank) g -= post_blank;
        if (u < U && k == labels[u]) g -= post_emit;
        out.grad.at(t, u, k) = g;
      }
    }
  }
  return out;
}

RealMatrix rnnt_node_posteriors(const JointLogits& joint, const LabelSeq& labels) {
  validate_rnnt_inputs(joint, labels);
  const RnntTables tab = rnnt_forward_backward(joint, labels);
  RealMatrix post(tab.num_rows, tab.num_frames);
  for (int t = 0; t < tab.num_frames; ++t) {
    for (int u = 0; u < tab.num_rows; ++u) {
      const double lg = tab.log_alpha(t, u) + tab.log_beta(t, u) - tab.log_like;
      post(u, t) = lg == kLogZero ? 0.0 : std::exp(lg);
    }
  }
  return post;
}

JointLogits joint_combine(const RealMatrix& frame_proj, const RealMatrix& prefix_proj) {
  STT_CHECK(frame_proj.cols() == prefix_proj.cols(),
            "joint_combine: class dimensions differ (", frame_proj.cols(), " vs ",
            prefix_proj.cols(), ")");
  STT_CHECK(frame_proj.rows() >= 1 && prefix_proj.rows() >= 1,
            "joint_combine: empty operand");
  JointLogits joint(frame_proj.rows(), prefix_proj.rows(), frame_proj.cols());
  for (int t = 0; t < frame_proj.rows(); ++t) {
    for (int u = 0; u < prefix_proj.rows(); ++u) {
      auto node = joint.node(t, u);
      for (int k = 0; k < frame_proj.cols(); ++k) {
        node[k] = frame_proj(t, k) + prefix_proj(u, k);
      }
    }
  }
  return joint;
}

RnntAlignment rnnt_best_alignment(const JointLogits& joint, const LabelSeq& labels) {
  validate_rnnt_inputs(joint, labels);
  const int T = joint.num_frames();
  const int U = joint.num_prefix_rows() - 1;
  const int blank = joint.num_classes() - 1;

  std::vector<RealMatrix> log_probs;
  log_probs.reserve(T);
  for (int t = 0; t < T; ++t) {
    RealMatrix m(U + 1, joint.num_classes());
    for (int u = 0; u <= U; ++u) log_softmax(joint.node(t, u), m.row(u));
    log_probs.push_back(std::move(m));
  }

  // Best completion from each node; reconstruction runs forward from (0,0)
  // and prefers the vertical (emit) transition on ties.
  RealMatrix best(T, U + 1, kLogZero);
  best(T - 1, U) = log_probs[T - 1](U, blank);
  for (int t = T - 1; t >= 0; --t) {
    for (int u = U; u >= 0; --u) {
      if (t == T - 1 && u == U) continue;
      double b = kLogZero;
      if (u < U) b = log_probs[t](u, labels[u]) + best(t, u + 1);
      if (t + 1 < T) {
        const double h = log_probs[t](u, blank) + best(t + 1, u);
        if (h > b) b = h;
      }
      best(t, u) = b;
    }
  }

  RnntAlignment out;
  out.log_prob = best(0, 0);
  int t = 0, u = 0;
  out.nodes.emplace_back(t, u);
  while (t != T - 1 || u != U) {
    bool emit;
    if (u == U) {
      emit = false;
    } else if (t == T - 1) {
      emit = true;
    } else {
      const double via_emit = log_probs[t](u, labels[u]) + best(t, u + 1);
      const double via_blank = log_probs[t](u, blank) + best(t + 1, u);
      emit = via_emit >= via_blank;  // tie: emit
    }
    if (emit) {
      ++u;
    } else {
      ++t;
    }
    out.nodes.emplace_back(t, u);
  }
  return out;
}

double brute_force_rnnt_loss(const JointLogits& joint, const LabelSeq& labels) {
  const int T = joint.num_frames();
  const int U = static_cast<int>(labels.size());
  STT_CHECK(T <= 8, "brute force guard: T' must be <= 8");
  STT_CHECK(U <= 5, "brute force guard: U must be <= 5");
  validate_rnnt_inputs(joint, labels);
  const int blank = joint.num_classes() - 1;

  std::vector<RealMatrix> log_probs;
  log_probs.reserve(T);
  for (int t = 0; t < T; ++t) {
    RealMatrix m(U + 1, joint.num_classes());
    for (int u = 0; u <= U; ++u) log_softmax(joint.node(t, u), m.row(u));
    log_probs.push_back(std::move(m));
  }

  double total = kLogZero;
  // Depth-first walk over all monotone paths (0,0) -> (T-1,U).
  struct Walker {
    const std::vector<RealMatrix>& lp;
    const LabelSeq& labels;
    int T, U, blank;
    double& total;
    void walk(int t, int u, double acc) {
      if (t == T - 1 && u == U) {
        total = log_sum_exp(total, acc + lp[t](u, blank));
        return;
      }
      if (u < U) walk(t, u + 1, acc + lp[t](u, labels[u]));
      if (t + 1 < T) walk(t + 1, u, acc + lp[t](u, blank));
    }
  };
  Walker{log_probs, labels, T, U, blank, total}.walk(0, 0, 0.0);
  return -total;
}

}  // namespace stt
