// core/include/stt/metrics.h

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

#ifndef STT_METRICS_H_
#define STT_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace stt {

struct EditCounts {
  int64_t substitutions = 0;
  int64_t insertions = 0;
  int64_t deletions = 0;
  int64_t distance() const { return substitutions + insertions + deletions; }
};

// Unit-cost Levenshtein with backtrace. Tie preference: substitution over
// deletion over insertion.
EditCounts edit_counts(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);
EditCounts char_edit_counts(const std::string& ref, const std::string& hyp);

std::vector<std::string> split_words(const std::string& text);

// Aggregated error breakdown. Percentages share one denominator, so
// wer() == subs_pct() + ins_pct() + dels_pct() holds exactly before any
// rounding. Empty-reference corpora use a denominator of one.
struct MetricsReport {
  int64_t utterances = 0;
  int64_t ref_words = 0;
  int64_t subs = 0;
  int64_t ins = 0;
  int64_t dels = 0;
  int64_t ref_chars = 0;
  int64_t char_errors = 0;
  std::string config_echo;
  std::string seed_echo;

  double subs_pct() const { return 100.0 * static_cast<double>(subs) / denom(); }
  double ins_pct() const { return 100.0 * static_cast<double>(ins) / denom(); }
  double dels_pct() const { return 100.0 * static_cast<double>(dels) / denom(); }
  double wer() const { return subs_pct() + ins_pct() + dels_pct(); }
  double cer() const {
    return 100.0 * static_cast<double>(char_errors) /
           static_cast<double>(ref_chars > 0 ? ref_chars : 1);
  }

 private:
  double denom() const { return static_cast<double>(ref_words > 0 ? ref_words : 1); }
};

// Word-level scoring of hypothesis/reference pairs (space-delimited words).
MetricsReport wer_breakdown(const std::vector<std::string>& refs,
                            const std::vector<std::string>& hyps);

}  // namespace stt

#endif  // STT_METRICS_H_
