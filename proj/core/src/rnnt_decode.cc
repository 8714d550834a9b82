// core/src/rnnt_decode.cc

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
#include <map>

#include "stt/decoders.h"
#include "stt/logmath.h"

namespace stt {

namespace {

struct LatticeHyp {
  double log_p = kLogZero;
  ScorerState state;
  bool truncated = false;
};

using HypMap = std::map<LabelSeq, LatticeHyp>;

// Merge by log-sum; the states of both branches describe the same prefix at
// the same frame, so either one can be kept (the heavier branch wins for
// numerical tidiness).
void merge_into(HypMap& map, const LabelSeq& tokens, double log_p, ScorerState state,
                bool truncated) {
  auto [it, fresh] = map.try_emplace(tokens);
  LatticeHyp& hyp = it->second;
  if (fresh || log_p > hyp.log_p) hyp.state = std::move(state);
  hyp.log_p = fresh ? log_p : log_sum_exp(hyp.log_p, log_p);
  hyp.truncated = hyp.truncated || truncated;
}

void prune(HypMap& map, int beam_width) {
  if (static_cast<int>(map.size()) <= beam_width) return;
  std::vector<std::pair<double, const LabelSeq*>> ranked;
  ranked.reserve(map.size());
  for (const auto& [tokens, hyp] : map) ranked.emplace_back(hyp.log_p, &tokens);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second->size() != b.second->size()) return a.second->size() < b.second->size();
    return *a.second < *b.second;
  });
  HypMap kept;
  for (int i = 0; i < beam_width; ++i) {
    kept.emplace(*ranked[i].second, std::move(map[*ranked[i].second]));
  }
  map = std::move(kept);
}

}  // namespace

std::vector<Hypothesis> rnnt_beam(const StepScorer& scorer, int num_frames,
                                  const DecodeConfig& cfg) {
  cfg.validate();
  STT_CHECK(num_frames >= 1, "rnnt_beam: need at least one frame");
  const int blank = scorer.num_classes() - 1;

  HypMap frame_hyps;
  {
    LatticeHyp root;
    root.log_p = 0.0;
    root.state = scorer.start();
    frame_hyps.emplace(LabelSeq{}, std::move(root));
  }

  for (int t = 0; t < num_frames; ++t) {
    const bool last_frame = t == num_frames - 1;
    HypMap next_frame;
    HypMap wave = std::move(frame_hyps);
    for (int emitted = 0; emitted <= cfg.max_symbols_per_step; ++emitted) {
      HypMap next_wave;
      for (auto& [tokens, hyp] : wave) {
        // A hypothesis at the output cap is frozen: only blank remains.
        const bool frozen = static_cast<int>(tokens.size()) >= cfg.max_output_len;
        // Blank: advance to the next frame (out of the lattice on the last
        // one, which terminates the path).
        const double blank_lp = hyp.log_p + hyp.state.log_probs[blank];
        if (last_frame) {
          merge_into(next_frame, tokens, blank_lp, ScorerState{}, hyp.truncated || frozen);
        } else {
          merge_into(next_frame, tokens, blank_lp, scorer.step(hyp.state, blank),
                     hyp.truncated || frozen);
        }
        if (emitted == cfg.max_symbols_per_step || frozen) continue;
        for (int sym = 0; sym < blank; ++sym) {
          const double lp = hyp.state.log_probs[sym];
          if (lp == kLogZero) continue;
          LabelSeq extended = tokens;
          extended.push_back(sym);
          merge_into(next_wave, extended, hyp.log_p + lp, scorer.step(hyp.state, sym),
                     hyp.truncated);
        }
      }
      if (next_wave.empty()) break;
      prune(next_wave, cfg.beam_width);
      wave = std::move(next_wave);
    }
    prune(next_frame, cfg.beam_width);
    frame_hyps = std::move(next_frame);
  }

  std::vector<Hypothesis> out;
  out.reserve(frame_hyps.size());
  for (auto& [tokens, hyp] : frame_hyps) {
    Hypothesis h;
    h.tokens = tokens;
    h.log_p_model = hyp.log_p;
    h.truncated = hyp.truncated;
    out.push_back(std::move(h));
  }
  sort_hypotheses(out, cfg);
  return out;
}

}  // namespace stt
