// core/src/metrics.cc

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

#include "stt/metrics.h"

#include <algorithm>
#include <sstream>
#include <vector>

#include "stt/error.h"

namespace stt {

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream ss(text);
  std::string word;
  while (ss >> word) words.push_back(word);
  return words;
}

namespace {

template <typename Seq>
EditCounts edit_counts_impl(const Seq& ref, const Seq& hyp) {
  const int m = static_cast<int>(ref.size());
  const int n = static_cast<int>(hyp.size());
  std::vector<std::vector<int>> dist(m + 1, std::vector<int>(n + 1, 0));
  for (int i = 0; i <= m; ++i) dist[i][0] = i;
  for (int j = 0; j <= n; ++j) dist[0][j] = j;
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (ref[i - 1] == hyp[j - 1]) {
        dist[i][j] = dist[i - 1][j - 1];
      } else {
        dist[i][j] = 1 + std::min({dist[i - 1][j - 1], dist[i - 1][j], dist[i][j - 1]});
      }
    }
  }

  // Backtrace with the documented tie preference: S over D over I.
  EditCounts counts;
  int i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && dist[i][j] == dist[i - 1][j - 1]) {
      --i;
      --j;
    } else if (i > 0 && j > 0 && dist[i][j] == dist[i - 1][j - 1] + 1) {
      ++counts.substitutions;
      --i;
      --j;
    } else if (i > 0 && dist[i][j] == dist[i - 1][j] + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

}  // namespace

EditCounts edit_counts(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  return edit_counts_impl(ref, hyp);
}

EditCounts char_edit_counts(const std::string& ref, const std::string& hyp) {
  return edit_counts_impl(ref, hyp);
}

MetricsReport wer_breakdown(const std::vector<std::string>& refs,
                            const std::vector<std::string>& hyps) {
  STT_CHECK(refs.size() == hyps.size(), "wer_breakdown: ", refs.size(), " references vs ",
            hyps.size(), " hypotheses");
  MetricsReport report;
  report.utterances = static_cast<int64_t>(refs.size());
  for (size_t i = 0; i < refs.size(); ++i) {
    const auto ref_words = split_words(refs[i]);
    const auto hyp_words = split_words(hyps[i]);
    const EditCounts words = edit_counts(ref_words, hyp_words);
    report.ref_words += static_cast<int64_t>(ref_words.size());
    report.subs += words.substitutions;
    report.ins += words.insertions;
    report.dels += words.deletions;
    const EditCounts chars = char_edit_counts(refs[i], hyps[i]);
    report.ref_chars += static_cast<int64_t>(refs[i].size());
    report.char_errors += chars.distance();
  }
  return report;
}

}  // namespace stt
