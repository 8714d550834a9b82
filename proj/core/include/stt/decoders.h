// core/include/stt/decoders.h

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

#ifndef STT_DECODERS_H_
#define STT_DECODERS_H_

#include <functional>
#include <memory>
#include <vector>

#include "stt/alphabet.h"
#include "stt/lm.h"
#include "stt/losses.h"
#include "stt/matrix.h"

namespace stt {

// Search hyper-parameters. Flag names on the CLI mirror these fields
// (lambda_lm is exposed as --lambda; `lambda` is reserved in C++).
struct DecodeConfig {
  int beam_width = 8;
  double alpha = 0.0;      // LM shallow-fusion weight (CTC search objective)
  double beta_wc = 0.0;    // word-count bonus (boundary = space symbol)
  double gamma = 0.0;      // length-normalization exponent, 0 disables
  double beta_cov = 0.0;   // coverage weight (attention search objective)
  double lambda_lm = 0.0;  // final-beam LM rescoring weight
  int max_symbols_per_step = 10;  // transducer emissions per frame cap
  int max_output_len = 200;

  void validate() const {
    STT_CHECK(beam_width >= 1, "beam_width must be >= 1");
    STT_CHECK(max_symbols_per_step >= 1, "max_symbols_per_step must be >= 1");
    STT_CHECK(max_output_len >= 1, "max_output_len must be >= 1");
    STT_CHECK(beta_cov >= 0.0, "beta_cov must be >= 0");
    STT_CHECK(gamma >= 0.0, "gamma must be >= 0");
  }
};

// Partial or final transcript with decomposed scores. The total is always
// recomputable from the stored components plus the config; nothing is
// accumulated into a hidden running score.
struct Hypothesis {
  LabelSeq tokens;
  double log_p_model = 0.0;  // lattice marginal or per-step product
  double log_p_lm = 0.0;     // filled by fusion or rescoring
  double coverage = 0.0;     // saturating coverage of the attention rows
  int word_count = 0;        // boundary symbols emitted (or |tokens| if none)
  bool alive = false;        // attention: never emitted eos ("unterminated")
  bool truncated = false;    // frozen after hitting max_output_len

  // model / max(1,|y|)^gamma + alpha*lm + beta_wc*wc + beta_cov*cov + lambda*lm.
  // Pipelines use alpha (fusion) or lambda_lm (rescoring), not both.
  double total_score(const DecodeConfig& cfg) const;
};

// Deterministic ranking: higher score, then shorter, then lexicographic.
void sort_hypotheses(std::vector<Hypothesis>& beam, const DecodeConfig& cfg);

// Incremental scoring interface the beam searches drive. A state is an
// immutable value: step() returns a fresh state, so beam expansion may
// branch freely from a shared parent.
//
// The returned log_probs are the normalized distribution over the NEXT
// token. Transducer scorers expose the lattice position implicitly: stepping
// the blank class advances one frame, stepping a symbol advances the prefix.
// Attention scorers consume sos inside start(); attention_row then carries
// the weights used for the pending prediction (empty for other scorers).
struct ScorerState {
  std::shared_ptr<const void> impl;
  std::vector<double> log_probs;
  std::vector<double> attention_row;
};

class StepScorer {
 public:
  virtual ~StepScorer() = default;
  virtual ScorerState start() const = 0;
  virtual ScorerState step(const ScorerState& state, int token) const = 0;
  virtual int num_classes() const = 0;
};

// ---------------------------------------------------------------------------
// CTC

// Per-frame argmax collapsed by the usual mapping (drop repeats, then
// blanks). frame_logits: T' x (V+1), blank last.
LabelSeq ctc_greedy(const RealMatrix& frame_logits);

// Prefix beam search over the frame posteriors, keeping the (ends-in-blank,
// ends-in-symbol) probability pair per prefix. The LM term and word bonus
// apply on symbol extension; the sentence-end LM term is added when the
// final beam is scored. lm may be null (pure acoustic search). The result is
// never empty: the empty prefix survives as a fallback.
std::vector<Hypothesis> ctc_prefix_beam(const RealMatrix& frame_logits, const Alphabet& alphabet,
                                        const NGramLM* lm, const DecodeConfig& cfg);

// ---------------------------------------------------------------------------
// Transducer

// Time-synchronous beam search: at each frame every hypothesis may emit up
// to max_symbols_per_step symbols before taking the blank transition to the
// next frame. Identical prefixes are merged by log-sum. No length
// normalization. Hypotheses reaching max_output_len are frozen (forced
// blank) and flagged truncated.
std::vector<Hypothesis> rnnt_beam(const StepScorer& scorer, int num_frames,
                                  const DecodeConfig& cfg);

// ---------------------------------------------------------------------------
// Attention

// Output-synchronous beam search. Hypotheses finishing on eos move to a
// completed pool; the search stops once no alive hypothesis can still beat
// the pool (model score can only decrease, coverage is bounded by zero) or
// when max_output_len is reached. If nothing completed, the best alive
// hypotheses are returned flagged alive ("unterminated").
std::vector<Hypothesis> attention_beam(const StepScorer& scorer, const DecodeConfig& cfg);

// Saturating coverage: sum_t log(min(column_mass_t, 1)), floored at 1e-10
// inside the log. Zero iff every encoder step accumulated mass >= 1, else
// negative. The matrix overload validates that rows are normalized.
double coverage_score(const RealMatrix& attention_rows);
double coverage_score(std::span<const double> column_mass);

// ---------------------------------------------------------------------------
// Rescoring and oracles

// Adds lambda_lm * lm_score(tokens) (sentence-end included) to each
// hypothesis and re-sorts. Stable: with lambda_lm = 0 the order is
// unchanged.
std::vector<Hypothesis> rescore_with_lm(std::vector<Hypothesis> beam, const Alphabet& alphabet,
                                        const NGramLM& lm, const DecodeConfig& cfg);

// Exhaustive argmax over every sequence of length <= max_len, the oracle the
// beam searches are checked against. Guarded to (V+2)^max_len <= 1e6. Ties
// break deterministically: shorter first, then lexicographic.
struct ExhaustiveResult {
  LabelSeq best;
  double score = 0.0;
};
ExhaustiveResult exhaustive_search(const std::function<double(const LabelSeq&)>& score_fn,
                                   int num_symbols, int max_len);

// Word-count term: boundary crossings when the alphabet has a space symbol,
// otherwise plain symbol count.
int word_count_of(const LabelSeq& tokens, const Alphabet& alphabet);

}  // namespace stt

#endif  // STT_DECODERS_H_
