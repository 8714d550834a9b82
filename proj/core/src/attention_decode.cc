// core/src/attention_decode.cc

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

#include "stt/decoders.h"
#include "stt/logmath.h"

namespace stt {

namespace {

struct AliveHyp {
  LabelSeq tokens;
  double log_p = 0.0;
  ScorerState state;
  std::vector<double> column_mass;  // one entry per encoder step; may be empty

  // Column mass including the pending attention row (the row that produced
  // the current distribution).
  std::vector<double> mass_with_pending() const {
    std::vector<double> mass = column_mass;
    if (!state.attention_row.empty()) {
      if (mass.empty()) mass.assign(state.attention_row.size(), 0.0);
      for (size_t t = 0; t < state.attention_row.size(); ++t) {
        mass[t] += state.attention_row[t];
      }
    }
    return mass;
  }

  // Upper bound on any future completed score: the model log-prob only
  // decreases, length normalization is maximal at max_output_len, and
  // coverage is bounded by zero.
  double optimistic_bound(const DecodeConfig& cfg) const {
    if (log_p >= 0.0) return log_p;
    return cfg.gamma == 0.0
               ? log_p
               : log_p / std::pow(static_cast<double>(cfg.max_output_len), cfg.gamma);
  }
};

// One joint pruning pool: symbol extensions and eos completions compete for
// the same beam slots. Only eos candidates that survive reach the completed
// pool, so a scorer that keeps eos improbable genuinely never terminates.
struct Candidate {
  bool finished = false;
  bool truncated = false;  // finish forced by the output-length cap
  double score = 0.0;      // rank score under the active config
  double log_p = 0.0;
  double coverage = 0.0;
  size_t parent = 0;
  int token = -1;  // eos when finished
};

}  // namespace

std::vector<Hypothesis> attention_beam(const StepScorer& scorer, const DecodeConfig& cfg) {
  cfg.validate();
  const int num_classes = scorer.num_classes();
  STT_CHECK(num_classes >= 3, "attention scorer must cover V+2 classes");
  const int eos = num_classes - 1;
  const int sos = num_classes - 2;

  std::vector<AliveHyp> alive;
  {
    AliveHyp root;
    root.state = scorer.start();
    alive.push_back(std::move(root));
  }

  std::vector<Hypothesis> completed;

  // One round per output position plus a final round in which hypotheses at
  // the length cap may still take their eos finish.
  for (int step = 0; step <= cfg.max_output_len && !alive.empty(); ++step) {
    std::vector<Candidate> candidates;
    for (size_t pi = 0; pi < alive.size(); ++pi) {
      const AliveHyp& hyp = alive[pi];
      const bool capped = static_cast<int>(hyp.tokens.size()) >= cfg.max_output_len;
      const double cov =
          cfg.beta_cov > 0.0 ? coverage_score(hyp.mass_with_pending()) : 0.0;
      for (int token = 0; token < num_classes; ++token) {
        if (token == sos) continue;
        if (capped && token != eos) continue;  // forced finish at the cap
        const double lp = hyp.state.log_probs[token];
        if (lp == kLogZero) continue;
        Candidate cand;
        cand.finished = token == eos;
        cand.truncated = capped;
        cand.log_p = hyp.log_p + lp;
        cand.coverage = cov;
        cand.parent = pi;
        cand.token = token;
        const double len = static_cast<double>(
            std::max<size_t>(1, hyp.tokens.size() + (cand.finished ? 0 : 1)));
        cand.score = cfg.gamma == 0.0 ? cand.log_p : cand.log_p / std::pow(len, cfg.gamma);
        cand.score += cfg.beta_cov * cov;
        candidates.push_back(cand);
      }
    }

    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate& a, const Candidate& b) {
                if (a.score != b.score) return a.score > b.score;
                const LabelSeq& ta = alive[a.parent].tokens;
                const LabelSeq& tb = alive[b.parent].tokens;
                if (ta.size() != tb.size()) return ta.size() < tb.size();
                if (ta != tb) return ta < tb;
                return a.token < b.token;
              });
    if (static_cast<int>(candidates.size()) > cfg.beam_width) {
      candidates.resize(cfg.beam_width);
    }

    std::vector<AliveHyp> next_alive;
    for (const Candidate& cand : candidates) {
      const AliveHyp& parent = alive[cand.parent];
      if (cand.finished) {
        Hypothesis done;
        done.tokens = parent.tokens;
        done.log_p_model = cand.log_p;
        done.coverage = coverage_score(parent.mass_with_pending());
        done.alive = false;
        done.truncated = cand.truncated;
        completed.push_back(std::move(done));
        continue;
      }
      AliveHyp ext;
      ext.tokens = parent.tokens;
      ext.tokens.push_back(cand.token);
      ext.log_p = cand.log_p;
      ext.state = scorer.step(parent.state, cand.token);
      ext.column_mass = parent.mass_with_pending();
      next_alive.push_back(std::move(ext));
    }

    sort_hypotheses(completed, cfg);
    if (static_cast<int>(completed.size()) > cfg.beam_width) {
      completed.resize(cfg.beam_width);
    }
    if (!completed.empty()) {
      // Strict comparison: a hypothesis that can only tie must survive so
      // the deterministic tie-break stays exact.
      const double best_done = completed.front().total_score(cfg);
      std::erase_if(next_alive, [&](const AliveHyp& h) {
        return h.optimistic_bound(cfg) < best_done;
      });
    }
    if (next_alive.empty() && completed.empty()) {
      break;  // dead end (zero eos mass at the cap): keep `alive` for the fallback
    }
    alive = std::move(next_alive);
  }

  if (!completed.empty()) {
    sort_hypotheses(completed, cfg);
    return completed;
  }

  // Nothing terminated within the cap, which requires eos to carry exactly
  // zero probability everywhere: hand back the alive beam flagged as such
  // (the looping-transcript failure mode).
  std::vector<Hypothesis> out;
  for (const AliveHyp& hyp : alive) {
    Hypothesis h;
    h.tokens = hyp.tokens;
    h.log_p_model = hyp.log_p;
    h.coverage = coverage_score(hyp.mass_with_pending());
    h.alive = true;
    h.truncated = true;
    out.push_back(std::move(h));
  }
  STT_CHECK(!out.empty(), "attention_beam: search space collapsed");
  sort_hypotheses(out, cfg);
  return out;
}

}  // namespace stt
