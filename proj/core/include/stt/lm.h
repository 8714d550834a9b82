// core/include/stt/lm.h

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

#ifndef STT_LM_H_
#define STT_LM_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stt {

// Character n-gram model with add-k smoothing and backoff to the longest
// seen context. The vocabulary is the set of characters observed in the
// training corpus plus a sentence-end event; for every context the
// conditional distribution over that vocabulary sums to one. Characters
// outside the vocabulary score the smoothing floor (decoding never fails on
// them). Immutable after training, so concurrent readers are safe.
class NGramLM {
 public:
  // Scoring history: the last order-1 characters seen. At the start of a
  // sentence the history is simply shorter, which is what the backoff
  // resolves against; no start-of-sentence padding symbols exist.
  struct State {
    std::string history;
  };

  // Add-k smoothed counts from `corpus` lines, deterministic in corpus
  // order. order in [1, 6], add_k > 0, corpus nonempty.
  static NGramLM train(const std::vector<std::string>& corpus, int order, double add_k);

  // log P(text </s>) under the chain rule, natural log.
  double score(std::string_view text) const;

  State start() const { return {}; }
  // log P(sym | state history); advances the state.
  double extend(State& state, char sym) const;
  // log P(sym | state history) without advancing.
  double log_prob(const State& state, char sym) const;
  double end_log_prob(const State& state) const;

  int order() const { return order_; }
  double add_k() const { return add_k_; }
  const std::string& vocab() const { return vocab_; }

  // Plain-text serialization: header (version, order, k, vocab) then one
  // "context symbol count" triple per line. Lossless round trip; loading
  // rejects unknown format versions.
  void save(std::ostream& os) const;
  static NGramLM load(std::istream& is);
  void save_file(const std::string& path) const;
  static NGramLM load_file(const std::string& path);

 private:
  NGramLM() = default;

  static constexpr int kEndOfSentence = -1;  // pseudo-symbol, never in contexts

  struct ContextCounts {
    int64_t total = 0;
    std::map<int, int64_t> by_symbol;  // key: vocab index or kEndOfSentence
  };

  double log_prob_symbol(const std::string& history, int sym) const;
  int vocab_index(char c) const;  // -2 when unknown

  int order_ = 0;
  double add_k_ = 0.0;
  std::string vocab_;  // sorted unique characters
  std::map<std::string, ContextCounts> counts_;  // context (raw chars) -> counts
};

}  // namespace stt

#endif  // STT_LM_H_
