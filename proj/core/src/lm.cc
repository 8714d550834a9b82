// core/src/lm.cc

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

#include "stt/lm.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "stt/error.h"

namespace stt {

namespace {

constexpr const char* kMagic = "char-ngram-lm";
constexpr int kFormatVersion = 1;
constexpr const char* kEosToken = "</s>";

bool plain_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Percent-encoding keeps the file whitespace-splittable even when symbols
// include spaces.
std::string encode_token(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    if (plain_char(c)) {
      out.push_back(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", static_cast<unsigned char>(c));
      out += buf;
    }
  }
  return out;
}

std::string decode_token(std::string_view tok) {
  std::string out;
  for (size_t i = 0; i < tok.size(); ++i) {
    if (tok[i] == '%') {
      STT_CHECK(i + 2 < tok.size(), "lm file: truncated escape in token '", std::string(tok), "'");
      const std::string hex(tok.substr(i + 1, 2));
      out.push_back(static_cast<char>(std::stoi(hex, nullptr, 16)));
      i += 2;
    } else {
      out.push_back(tok[i]);
    }
  }
  return out;
}

}  // namespace

NGramLM NGramLM::train(const std::vector<std::string>& corpus, int order, double add_k) {
  STT_CHECK(!corpus.empty(), "lm training corpus is empty");
  STT_CHECK(order >= 1 && order <= 6, "lm order must be in [1, 6], got ", order);
  STT_CHECK(add_k > 0.0, "lm smoothing constant must be positive, got ", add_k);

  NGramLM lm;
  lm.order_ = order;
  lm.add_k_ = add_k;

  std::set<char> chars;
  for (const auto& line : corpus) chars.insert(line.begin(), line.end());
  lm.vocab_.assign(chars.begin(), chars.end());
  STT_CHECK(!lm.vocab_.empty(), "lm training corpus has no characters");

  for (const auto& line : corpus) {
    const int len = static_cast<int>(line.size());
    for (int i = 0; i <= len; ++i) {
      const int sym = i < len ? lm.vocab_index(line[i]) : kEndOfSentence;
      const int max_ctx = std::min(order - 1, i);
      for (int ctx_len = 0; ctx_len <= max_ctx; ++ctx_len) {
        auto& ctx = lm.counts_[line.substr(i - ctx_len, ctx_len)];
        ctx.total += 1;
        ctx.by_symbol[sym] += 1;
      }
    }
  }
  return lm;
}

int NGramLM::vocab_index(char c) const {
  const auto it = std::lower_bound(vocab_.begin(), vocab_.end(), c);
  if (it == vocab_.end() || *it != c) return -2;
  return static_cast<int>(it - vocab_.begin());
}

double NGramLM::log_prob_symbol(const std::string& history, int sym) const {
  const int vocab_with_end = static_cast<int>(vocab_.size()) + 1;
  // Longest seen suffix of the history; the empty context always exists.
  const int max_len = std::min<int>(order_ - 1, static_cast<int>(history.size()));
  for (int len = max_len; len >= 0; --len) {
    const auto it = counts_.find(history.substr(history.size() - len, len));
    if (it == counts_.end() || it->second.total == 0) continue;
    const auto& ctx = it->second;
    int64_t count = 0;
    if (const auto sit = ctx.by_symbol.find(sym); sit != ctx.by_symbol.end()) {
      count = sit->second;
    }
    return std::log(static_cast<double>(count) + add_k_) -
           std::log(static_cast<double>(ctx.total) + add_k_ * vocab_with_end);
  }
  throw ValidationError("lm has no unigram table; model was not trained");
}

double NGramLM::log_prob(const State& state, char sym) const {
  const int idx = vocab_index(sym);
  // Unknown characters get the smoothing floor of the resolved context.
  return log_prob_symbol(state.history, idx);
}

double NGramLM::end_log_prob(const State& state) const {
  return log_prob_symbol(state.history, kEndOfSentence);
}

double NGramLM::extend(State& state, char sym) const {
  const double lp = log_prob(state, sym);
  state.history.push_back(sym);
  if (static_cast<int>(state.history.size()) > order_ - 1) {
    state.history.erase(0, state.history.size() - (order_ - 1));
  }
  return lp;
}

double NGramLM::score(std::string_view text) const {
  State state = start();
  double lp = 0.0;
  for (char c : text) lp += extend(state, c);
  return lp + end_log_prob(state);
}

void NGramLM::save(std::ostream& os) const {
  os << kMagic << " " << kFormatVersion << "\n";
  os << "order " << order_ << "\n";
  char kbuf[64];
  std::snprintf(kbuf, sizeof(kbuf), "%.17g", add_k_);
  os << "addk " << kbuf << "\n";
  os << "vocab";
  for (char c : vocab_) os << " " << encode_token(std::string_view(&c, 1));
  os << "\n";
  size_t lines = 0;
  for (const auto& [ctx, cc] : counts_) lines += cc.by_symbol.size();
  os << "counts " << lines << "\n";
  for (const auto& [ctx, cc] : counts_) {
    const std::string ctx_field = "_" + encode_token(ctx);
    for (const auto& [sym, count] : cc.by_symbol) {
      const std::string sym_field =
          sym == kEndOfSentence ? kEosToken : encode_token(std::string_view(&vocab_[sym], 1));
      os << ctx_field << " " << sym_field << " " << count << "\n";
    }
  }
}

NGramLM NGramLM::load(std::istream& is) {
  std::string magic;
  int version = -1;
  is >> magic >> version;
  STT_CHECK(magic == kMagic, "lm file: bad magic '", magic, "'");
  STT_CHECK(version == kFormatVersion, "lm file: unsupported version ", version);

  NGramLM lm;
  std::string key;
  is >> key >> lm.order_;
  STT_CHECK(key == "order" && lm.order_ >= 1 && lm.order_ <= 6, "lm file: bad order field");
  is >> key >> lm.add_k_;
  STT_CHECK(key == "addk" && lm.add_k_ > 0.0, "lm file: bad addk field");
  is >> key;
  STT_CHECK(key == "vocab", "lm file: missing vocab");
  {
    std::string rest;
    std::getline(is, rest);
    std::istringstream vs(rest);
    std::string tok;
    while (vs >> tok) {
      const std::string decoded = decode_token(tok);
      STT_CHECK(decoded.size() == 1, "lm file: vocab token '", tok, "' is not one character");
      lm.vocab_.push_back(decoded[0]);
    }
    STT_CHECK(!lm.vocab_.empty(), "lm file: empty vocab");
    STT_CHECK(std::is_sorted(lm.vocab_.begin(), lm.vocab_.end()), "lm file: vocab not sorted");
  }
  size_t lines = 0;
  is >> key >> lines;
  STT_CHECK(key == "counts", "lm file: missing counts");
  for (size_t i = 0; i < lines; ++i) {
    std::string ctx_field, sym_field;
    int64_t count = 0;
    is >> ctx_field >> sym_field >> count;
    STT_CHECK(is.good() || is.eof(), "lm file: truncated counts section");
    STT_CHECK(!ctx_field.empty() && ctx_field[0] == '_', "lm file: bad context field");
    STT_CHECK(count > 0, "lm file: nonpositive count");
    const std::string ctx = decode_token(std::string_view(ctx_field).substr(1));
    int sym;
    if (sym_field == kEosToken) {
      sym = kEndOfSentence;
    } else {
      const std::string decoded = decode_token(sym_field);
      STT_CHECK(decoded.size() == 1, "lm file: bad symbol field '", sym_field, "'");
      sym = lm.vocab_index(decoded[0]);
      STT_CHECK(sym >= 0, "lm file: symbol outside vocab");
    }
    auto& cc = lm.counts_[ctx];
    cc.total += count;
    cc.by_symbol[sym] += count;
  }
  return lm;
}

void NGramLM::save_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);  // binary: LF line ends everywhere
  STT_CHECK(os.good(), "cannot open '", path, "' for writing");
  save(os);
  STT_CHECK(os.good(), "failed writing '", path, "'");
}

NGramLM NGramLM::load_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  STT_CHECK(is.good(), "cannot open '", path, "'");
  return load(is);
}

}  // namespace stt
