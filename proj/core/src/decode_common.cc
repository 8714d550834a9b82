// core/src/decode_common.cc

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

double Hypothesis::total_score(const DecodeConfig& cfg) const {
  const double len = static_cast<double>(std::max<size_t>(1, tokens.size()));
  double score = cfg.gamma == 0.0 ? log_p_model : log_p_model / std::pow(len, cfg.gamma);
  score += cfg.alpha * log_p_lm;
  score += cfg.beta_wc * word_count;
  score += cfg.beta_cov * coverage;
  score += cfg.lambda_lm * log_p_lm;
  return score;
}

void sort_hypotheses(std::vector<Hypothesis>& beam, const DecodeConfig& cfg) {
  std::stable_sort(beam.begin(), beam.end(), [&cfg](const Hypothesis& a, const Hypothesis& b) {
    const double sa = a.total_score(cfg);
    const double sb = b.total_score(cfg);
    if (sa != sb) return sa > sb;
    if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
    return a.tokens < b.tokens;
  });
}

double coverage_score(std::span<const double> column_mass) {
  constexpr double kFloor = 1e-10;
  double cov = 0.0;
  for (double mass : column_mass) {
    cov += std::log(std::max(std::min(mass, 1.0), kFloor));
  }
  return cov;
}

double coverage_score(const RealMatrix& attention_rows) {
  validate_attention_rows(attention_rows);
  std::vector<double> mass(attention_rows.cols(), 0.0);
  for (int u = 0; u < attention_rows.rows(); ++u) {
    for (int t = 0; t < attention_rows.cols(); ++t) mass[t] += attention_rows(u, t);
  }
  return coverage_score(std::span<const double>(mass));
}

int word_count_of(const LabelSeq& tokens, const Alphabet& alphabet) {
  if (!alphabet.has_space()) return static_cast<int>(tokens.size());
  const int space = alphabet.space_id();
  int boundaries = 0;
  for (int id : tokens) {
    if (id == space) ++boundaries;
  }
  return boundaries;
}

std::vector<Hypothesis> rescore_with_lm(std::vector<Hypothesis> beam, const Alphabet& alphabet,
                                        const NGramLM& lm, const DecodeConfig& cfg) {
  STT_CHECK(!beam.empty(), "rescore: empty beam");
  for (auto& hyp : beam) {
    hyp.log_p_lm = lm.score(alphabet.decode(hyp.tokens));
  }
  sort_hypotheses(beam, cfg);
  return beam;
}

ExhaustiveResult exhaustive_search(const std::function<double(const LabelSeq&)>& score_fn,
                                   int num_symbols, int max_len) {
  STT_CHECK(num_symbols >= 1, "exhaustive_search: need at least one symbol");
  STT_CHECK(max_len >= 0, "exhaustive_search: max_len must be >= 0");
  STT_CHECK(std::pow(static_cast<double>(num_symbols) + 2.0, max_len) <= 1e6,
            "exhaustive_search guard: (V+2)^max_len exceeds 1e6");

  ExhaustiveResult result;
  result.best = {};
  result.score = score_fn(result.best);

  LabelSeq seq;
  for (int len = 1; len <= max_len; ++len) {
    seq.assign(len, 0);
    for (;;) {
      const double s = score_fn(seq);
      // Shorter and lexicographically smaller candidates were visited first,
      // so strict improvement is exactly the documented tie-break.
      if (s > result.score) {
        result.score = s;
        result.best = seq;
      }
      int pos = len - 1;
      while (pos >= 0 && seq[pos] == num_symbols - 1) seq[pos--] = 0;
      if (pos < 0) break;
      ++seq[pos];
    }
  }
  return result;
}

}  // namespace stt
