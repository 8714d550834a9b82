// core/include/stt/alphabet.h

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

#ifndef STT_ALPHABET_H_
#define STT_ALPHABET_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "stt/error.h"

namespace stt {

// Label sequence over alphabet symbol ids in [0, V). Never contains blank,
// sos, or eos.
using LabelSeq = std::vector<int>;

// Character inventory shared by all three models. Class ids are laid out as
//
//   0 .. V-1   alphabet symbols
//   V          blank  (lattice models score V+1 classes)
//   V          sos    (attention input only, never a target)
//   V+1        eos    (attention models score V+2 classes)
//
// blank and sos can share an index because no model family uses both: the
// lattice losses never see sos/eos and the attention loss never sees blank.
// Keeping blank one past the last symbol keeps label ids stable as the
// alphabet grows.
class Alphabet {
 public:
  explicit Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
    STT_CHECK(!symbols_.empty(), "alphabet must contain at least one symbol");
    id_of_.fill(-1);
    for (size_t i = 0; i < symbols_.size(); ++i) {
      const unsigned char c = static_cast<unsigned char>(symbols_[i]);
      STT_CHECK(id_of_[c] < 0, "duplicate alphabet symbol '", symbols_[i], "'");
      id_of_[c] = static_cast<int>(i);
    }
  }

  int size() const { return static_cast<int>(symbols_.size()); }
  int blank_id() const { return size(); }
  int sos_id() const { return size(); }
  int eos_id() const { return size() + 1; }
  int num_lattice_classes() const { return size() + 1; }
  int num_attention_classes() const { return size() + 2; }

  const std::string& symbols() const { return symbols_; }
  char symbol(int id) const {
    STT_CHECK(id >= 0 && id < size(), "symbol id ", id, " out of range");
    return symbols_[id];
  }
  bool has(char c) const { return id_of_[static_cast<unsigned char>(c)] >= 0; }
  int id_of(char c) const {
    const int id = id_of_[static_cast<unsigned char>(c)];
    STT_CHECK(id >= 0, "character '", c, "' not in alphabet");
    return id;
  }

  bool has_space() const { return has(' '); }
  int space_id() const { return id_of(' '); }

  LabelSeq encode(std::string_view text) const {
    LabelSeq ids;
    ids.reserve(text.size());
    for (char c : text) ids.push_back(id_of(c));
    return ids;
  }

  std::string decode(const LabelSeq& ids) const {
    std::string text;
    text.reserve(ids.size());
    for (int id : ids) text.push_back(symbol(id));
    return text;
  }

 private:
  std::string symbols_;
  std::array<int, 256> id_of_{};
};

// Rejects labels outside [0, num_symbols): blank, sos, eos, or garbage.
void validate_labels(const LabelSeq& labels, int num_symbols);

}  // namespace stt

#endif  // STT_ALPHABET_H_
