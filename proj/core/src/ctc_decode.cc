// core/src/ctc_decode.cc

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

#include <algorithm>
#include <cmath>
#include <map>

#include "stt/decoders.h"
#include "stt/logmath.h"

namespace stt {

LabelSeq ctc_greedy(const RealMatrix& frame_logits) {
  const int blank = frame_logits.cols() - 1;
  LabelSeq out;
  int prev = blank;
  for (int t = 0; t < frame_logits.rows(); ++t) {
    const auto row = frame_logits.row(t);
    int arg = 0;
    for (int k = 1; k < frame_logits.cols(); ++k) {
      if (row[k] > row[arg]) arg = k;
    }
    if (arg != blank && arg != prev) out.push_back(arg);
    prev = arg;
  }
  return out;
}

namespace {

// Per-prefix search state: the classic pair of path masses (prefix realized
// with a trailing blank vs a trailing symbol) plus the prefix-level LM
// bookkeeping, which is identical for every path of the prefix.
struct PrefixState {
  double lp_blank = kLogZero;
  double lp_symbol = kLogZero;
  double lm_logp = 0.0;
  int word_count = 0;
  NGramLM::State lm_state;

  double lp_total() const { return log_sum_exp(lp_blank, lp_symbol); }
};

using PrefixMap = std::map<LabelSeq, PrefixState>;

double pruning_score(const PrefixState& ps, const DecodeConfig& cfg) {
  return ps.lp_total() + cfg.alpha * ps.lm_logp + cfg.beta_wc * ps.word_count;
}

}  // namespace

std::vector<Hypothesis> ctc_prefix_beam(const RealMatrix& frame_logits, const Alphabet& alphabet,
                                        const NGramLM* lm, const DecodeConfig& cfg) {
  cfg.validate();
  const int num_classes = frame_logits.cols();
  const int blank = num_classes - 1;
  STT_CHECK(alphabet.num_lattice_classes() == num_classes,
            "alphabet size does not match frame logits");

  PrefixMap beams;
  {
    PrefixState root;
    root.lp_blank = 0.0;
    if (lm != nullptr) root.lm_state = lm->start();
    beams.emplace(LabelSeq{}, std::move(root));
  }

  std::vector<double> log_probs(num_classes);
  for (int t = 0; t < frame_logits.rows(); ++t) {
    log_softmax(frame_logits.row(t), log_probs);
    PrefixMap next;
    for (const auto& [prefix, ps] : beams) {
      const double lp_any = ps.lp_total();

      // Blank keeps the prefix; so does repeating its last symbol.
      {
        auto& tgt = next[prefix];
        if (tgt.lp_blank == kLogZero && tgt.lp_symbol == kLogZero) {
          tgt.lm_logp = ps.lm_logp;
          tgt.word_count = ps.word_count;
          tgt.lm_state = ps.lm_state;
        }
        tgt.lp_blank = log_sum_exp(tgt.lp_blank, lp_any + log_probs[blank]);
        if (!prefix.empty()) {
          tgt.lp_symbol = log_sum_exp(tgt.lp_symbol, ps.lp_symbol + log_probs[prefix.back()]);
        }
      }

      // Extend with every symbol. Repeating the last symbol only extends the
      // prefix when a blank separated the two copies.
      for (int sym = 0; sym < blank; ++sym) {
        const double mass = (!prefix.empty() && sym == prefix.back())
                                ? ps.lp_blank
                                : lp_any;
        if (mass == kLogZero) continue;
        LabelSeq extended = prefix;
        extended.push_back(sym);
        auto& tgt = next[extended];
        if (tgt.lp_blank == kLogZero && tgt.lp_symbol == kLogZero) {
          tgt.lm_logp = ps.lm_logp;
          tgt.word_count = ps.word_count;
          tgt.lm_state = ps.lm_state;
          if (lm != nullptr) {
            tgt.lm_logp += lm->extend(tgt.lm_state, alphabet.symbol(sym));
          }
          if (alphabet.has_space() ? sym == alphabet.space_id() : true) {
            tgt.word_count += 1;
          }
        }
        tgt.lp_symbol = log_sum_exp(tgt.lp_symbol, mass + log_probs[sym]);
      }
    }

    // Prune to the beam width on the running fusion objective.
    if (static_cast<int>(next.size()) > cfg.beam_width) {
      std::vector<std::pair<double, const LabelSeq*>> ranked;
      ranked.reserve(next.size());
      for (const auto& [prefix, ps] : next) {
        ranked.emplace_back(pruning_score(ps, cfg), &prefix);
      }
      std::sort(ranked.begin(), ranked.end(),
                [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  if (a.second->size() != b.second->size()) {
                    return a.second->size() < b.second->size();
                  }
                  return *a.second < *b.second;
                });
      PrefixMap pruned;
      for (int i = 0; i < cfg.beam_width; ++i) {
        pruned.emplace(*ranked[i].second, std::move(next[*ranked[i].second]));
      }
      next = std::move(pruned);
    }
    beams = std::move(next);
  }

  std::vector<Hypothesis> out;
  out.reserve(beams.size());
  for (auto& [prefix, ps] : beams) {
    Hypothesis hyp;
    hyp.tokens = prefix;
    hyp.log_p_model = ps.lp_total();
    hyp.log_p_lm = lm != nullptr ? ps.lm_logp + lm->end_log_prob(ps.lm_state) : 0.0;
    hyp.word_count = ps.word_count;
    out.push_back(std::move(hyp));
  }
  sort_hypotheses(out, cfg);
  return out;
}

}  // namespace stt
