// core/src/dataset.cc

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

#include "stt/dataset.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stt/alphabet.h"
#include "stt/error.h"

namespace stt {

namespace {

// --------------------------------------------------------------------------
// base64 (standard alphabet, padded)

constexpr char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const unsigned char* data, size_t len) {
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (size_t i = 0; i < len; i += 3) {
    uint32_t chunk = static_cast<uint32_t>(data[i]) << 16;
    if (i + 1 < len) chunk |= static_cast<uint32_t>(data[i + 1]) << 8;
    if (i + 2 < len) chunk |= static_cast<uint32_t>(data[i + 2]);
    out.push_back(kB64Chars[(chunk >> 18) & 63]);
    out.push_back(kB64Chars[(chunk >> 12) & 63]);
    out.push_back(i + 1 < len ? kB64Chars[(chunk >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? kB64Chars[chunk & 63] : '=');
  }
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  int8_t lut[256];
  std::fill(std::begin(lut), std::end(lut), int8_t{-1});
  for (int i = 0; i < 64; ++i) lut[static_cast<unsigned char>(kB64Chars[i])] = static_cast<int8_t>(i);
  STT_CHECK(text.size() % 4 == 0, "base64: length not a multiple of 4");
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    uint32_t chunk = 0;
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + j];
      chunk <<= 6;
      if (c == '=') {
        ++pad;
      } else {
        const int8_t v = lut[static_cast<unsigned char>(c)];
        STT_CHECK(v >= 0, "base64: bad character '", c, "'");
        chunk |= static_cast<uint32_t>(v);
      }
    }
    out.push_back(static_cast<unsigned char>((chunk >> 16) & 0xFF));
    if (pad < 2) out.push_back(static_cast<unsigned char>((chunk >> 8) & 0xFF));
    if (pad < 1) out.push_back(static_cast<unsigned char>(chunk & 0xFF));
  }
  return out;
}

RealMatrix prototype_table(const SyntheticSpec& spec) {
  // Audio prototypes are derived from a dedicated child stream so text and
  // audio sampling cannot interfere.
  SeededRng rng = SeededRng(spec.seed).child(0);
  RealMatrix protos(static_cast<int>(spec.symbols.size()), spec.feature_dim);
  for (int s = 0; s < protos.rows(); ++s) {
    for (int f = 0; f < spec.feature_dim; ++f) protos(s, f) = rng.normal();
  }
  return protos;
}

}  // namespace

void SyntheticSpec::validate() const {
  Alphabet check(symbols);
  STT_CHECK(feature_dim >= 1, "dataset spec: feature_dim must be >= 1");
  STT_CHECK(dmin >= 1 && dmax >= dmin, "dataset spec: need 1 <= dmin <= dmax");
  STT_CHECK(noise_sigma >= 0.0, "dataset spec: negative noise");
  STT_CHECK(silence_prob >= 0.0 && silence_prob <= 1.0, "dataset spec: silence_prob in [0,1]");
  STT_CHECK(noise_utt_fraction >= 0.0 && noise_utt_fraction <= 1.0,
            "dataset spec: noise_utt_fraction in [0,1]");
  STT_CHECK(min_symbols >= 1 && max_symbols >= min_symbols, "dataset spec: bad length range");
  STT_CHECK(text_divergence >= 0.0 && text_divergence <= 1.0,
            "dataset spec: text_divergence in [0,1]");
  STT_CHECK(train_count >= 1 && dev_count >= 1 && test_count >= 1, "dataset spec: empty split");
  STT_CHECK(corpus_lines >= 1, "dataset spec: corpus_lines must be >= 1");
}

std::string SyntheticSpec::to_json() const {
  nlohmann::json j;
  j["symbols"] = symbols;
  j["feature_dim"] = feature_dim;
  j["dmin"] = dmin;
  j["dmax"] = dmax;
  j["noise_sigma"] = noise_sigma;
  j["silence_prob"] = silence_prob;
  j["noise_utt_fraction"] = noise_utt_fraction;
  j["min_symbols"] = min_symbols;
  j["max_symbols"] = max_symbols;
  j["text_seed_train"] = text_seed_train;
  j["text_seed_test"] = text_seed_test;
  j["text_divergence"] = text_divergence;
  j["train_count"] = train_count;
  j["dev_count"] = dev_count;
  j["test_count"] = test_count;
  j["corpus_lines"] = corpus_lines;
  j["seed"] = seed;
  return j.dump();
}

SyntheticSpec SyntheticSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(msg_cat("dataset spec: bad json: ", e.what()));
  }
  SyntheticSpec spec;
  try {
    spec.symbols = j.at("symbols").get<std::string>();
    spec.feature_dim = j.at("feature_dim").get<int>();
    spec.dmin = j.at("dmin").get<int>();
    spec.dmax = j.at("dmax").get<int>();
    spec.noise_sigma = j.at("noise_sigma").get<double>();
    spec.silence_prob = j.at("silence_prob").get<double>();
    spec.noise_utt_fraction = j.at("noise_utt_fraction").get<double>();
    spec.min_symbols = j.at("min_symbols").get<int>();
    spec.max_symbols = j.at("max_symbols").get<int>();
    spec.text_seed_train = j.at("text_seed_train").get<uint64_t>();
    spec.text_seed_test = j.at("text_seed_test").get<uint64_t>();
    spec.text_divergence = j.at("text_divergence").get<double>();
    spec.train_count = j.at("train_count").get<int>();
    spec.dev_count = j.at("dev_count").get<int>();
    spec.test_count = j.at("test_count").get<int>();
    spec.corpus_lines = j.at("corpus_lines").get<int>();
    spec.seed = j.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(msg_cat("dataset spec: missing field: ", e.what()));
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Text source

namespace {

// Cubing sharpens the distributions so the chains have learnable structure
// instead of near-uniform noise.
std::vector<std::vector<double>> chain_weights(int n, uint64_t seed) {
  SeededRng rng(seed);
  std::vector<std::vector<double>> weights(static_cast<size_t>(n + 1) * (n + 1));
  for (auto& row : weights) {
    row.resize(n);
    for (int s = 0; s < n; ++s) {
      const double u = rng.uniform();
      row[s] = u * u * u + 1e-4;
    }
  }
  return weights;
}

}  // namespace

MarkovTextSource::MarkovTextSource(const std::string& symbols, uint64_t base_seed,
                                   uint64_t alt_seed, double divergence)
    : symbols_(symbols) {
  STT_CHECK(divergence >= 0.0 && divergence <= 1.0, "text divergence must be in [0, 1]");
  const int n = static_cast<int>(symbols_.size());
  const auto base = chain_weights(n, base_seed);
  const auto alt = chain_weights(n, alt_seed);
  // Divergence resamples whole contexts from the alternate chain, so both
  // chains stay equally sharp and the knob controls how many contexts
  // disagree rather than flattening the mixture.
  SeededRng select(base_seed ^ (alt_seed * 0x9E3779B97F4A7C15ULL));
  cumulative_.resize(base.size());
  for (size_t ctx = 0; ctx < base.size(); ++ctx) {
    const bool use_alt = select.uniform() < divergence;
    const auto& weights = use_alt ? alt[ctx] : base[ctx];
    double total = 0.0;
    for (int s = 0; s < n; ++s) total += weights[s];
    auto& cdf = cumulative_[ctx];
    cdf.resize(n);
    double acc = 0.0;
    for (int s = 0; s < n; ++s) {
      acc += weights[s] / total;
      cdf[s] = acc;
    }
    cdf[n - 1] = 1.0;
  }
}

int MarkovTextSource::context_id(int prev2, int prev1) const {
  const int n = static_cast<int>(symbols_.size());
  return (prev2 + 1) * (n + 1) + (prev1 + 1);
}

std::string MarkovTextSource::sample(SeededRng& rng, int length) const {
  std::string text;
  int prev2 = -1, prev1 = -1;
  while (static_cast<int>(text.size()) < length) {
    const auto& cdf = cumulative_[context_id(prev2, prev1)];
    const double u = rng.uniform();
    int s = 0;
    while (s + 1 < static_cast<int>(cdf.size()) && cdf[s] <= u) ++s;
    const char c = symbols_[s];
    // No leading, trailing-at-sample, or doubled spaces.
    if (c == ' ' && (text.empty() || text.back() == ' ')) continue;
    text.push_back(c);
    prev2 = prev1;
    prev1 = s;
  }
  while (!text.empty() && text.back() == ' ') text.pop_back();
  if (text.empty()) text.push_back(symbols_[0] == ' ' ? symbols_[1] : symbols_[0]);
  return text;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

Utterance render_utterance(const SyntheticSpec& spec, const RealMatrix& protos,
                           const std::string& id, const std::string& text, bool pure_noise,
                           SeededRng& rng) {
  const Alphabet alphabet(spec.symbols);
  std::vector<int> frame_symbols;  // -1 = silence
  auto push_silence = [&](int count) {
    for (int i = 0; i < count; ++i) frame_symbols.push_back(-1);
  };

  const auto draw_len = [&]() { return spec.dmin + rng.uniform_int(spec.dmax - spec.dmin + 1); };

  if (pure_noise) {
    const int sym_count = spec.min_symbols +
                          rng.uniform_int(spec.max_symbols - spec.min_symbols + 1);
    push_silence(sym_count * ((spec.dmin + spec.dmax) / 2 + 1));
  } else {
    char prev = '\0';
    for (char c : text) {
      if (rng.uniform() < spec.silence_prob) push_silence(draw_len());
      if (c == prev) push_silence(1);  // mandatory separator inside a repeat
      const int run = draw_len();
      const int sym = alphabet.id_of(c);
      for (int i = 0; i < run; ++i) frame_symbols.push_back(sym);
      prev = c;
    }
    if (rng.uniform() < spec.silence_prob) push_silence(draw_len());
  }

  Utterance utt;
  utt.id = id;
  utt.reference = pure_noise ? "" : text;
  utt.frames = RealMatrix(static_cast<int>(frame_symbols.size()), spec.feature_dim);
  for (int t = 0; t < utt.frames.rows(); ++t) {
    for (int f = 0; f < spec.feature_dim; ++f) {
      const double base = frame_symbols[t] >= 0 ? protos(frame_symbols[t], f) : 0.0;
      utt.frames(t, f) = base + spec.noise_sigma * rng.normal();
    }
  }
  return utt;
}

std::vector<Utterance> render_split(const SyntheticSpec& spec, const RealMatrix& protos,
                                    const MarkovTextSource& text_source, const std::string& tag,
                                    int count, SeededRng rng) {
  std::vector<Utterance> utts;
  utts.reserve(count);
  for (int i = 0; i < count; ++i) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%05d", tag.c_str(), i);
    const bool pure_noise = rng.uniform() < spec.noise_utt_fraction;
    const int len = spec.min_symbols + rng.uniform_int(spec.max_symbols - spec.min_symbols + 1);
    const std::string text = text_source.sample(rng, len);
    utts.push_back(render_utterance(spec, protos, id, text, pure_noise, rng));
  }
  return utts;
}

}  // namespace

void generate_dataset(const SyntheticSpec& spec, const std::string& out_dir) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  STT_CHECK(!ec, "cannot create output directory '", out_dir, "': ", ec.message());

  const RealMatrix protos = prototype_table(spec);
  const MarkovTextSource train_text(spec.symbols, spec.text_seed_train);
  const MarkovTextSource test_text(spec.symbols, spec.text_seed_train, spec.text_seed_test,
                                   spec.text_divergence);
  const SeededRng base(spec.seed);

  save_dataset(out_dir + "/train.dat",
               render_split(spec, protos, train_text, "train", spec.train_count, base.child(1)));
  save_dataset(out_dir + "/dev.dat",
               render_split(spec, protos, train_text, "dev", spec.dev_count, base.child(2)));
  save_dataset(out_dir + "/test.dat",
               render_split(spec, protos, test_text, "test", spec.test_count, base.child(3)));

  // LM corpus from the test-side text distribution.
  {
    SeededRng rng = base.child(4);
    std::vector<std::string> lines;
    lines.reserve(spec.corpus_lines);
    for (int i = 0; i < spec.corpus_lines; ++i) {
      const int len = spec.min_symbols + rng.uniform_int(spec.max_symbols - spec.min_symbols + 1);
      lines.push_back(test_text.sample(rng, len));
    }
    save_text_lines(out_dir + "/corpus.txt", lines);
  }

  std::ofstream meta(out_dir + "/meta.json", std::ios::binary);
  STT_CHECK(meta.good(), "cannot write meta.json under '", out_dir, "'");
  meta << spec.to_json() << "\n";
}

void save_dataset(const std::string& path, const std::vector<Utterance>& utts) {
  std::ofstream os(path, std::ios::binary);
  STT_CHECK(os.good(), "cannot open '", path, "' for writing");
  for (const Utterance& utt : utts) {
    STT_CHECK(utt.reference.find('\t') == std::string::npos, "reference contains a tab");
    std::vector<float> block(utt.frames.data().begin(), utt.frames.data().end());
    os << utt.id << "\t" << utt.frames.rows() << " " << utt.frames.cols() << "\t"
       << utt.reference << "\t"
       << base64_encode(reinterpret_cast<const unsigned char*>(block.data()),
                        block.size() * sizeof(float))
       << "\n";
  }
  STT_CHECK(os.good(), "failed writing '", path, "'");
}

std::vector<Utterance> load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  STT_CHECK(is.good(), "cannot open dataset '", path, "'");
  std::vector<Utterance> utts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      const size_t tab = line.find('\t', start);
      STT_CHECK(tab != std::string::npos, "dataset record has fewer than 4 fields");
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    fields.push_back(line.substr(start));

    Utterance utt;
    utt.id = fields[0];
    int rows = 0, cols = 0;
    STT_CHECK(std::sscanf(fields[1].c_str(), "%d %d", &rows, &cols) == 2,
              "dataset record '", utt.id, "': bad shape header");
    utt.reference = fields[2];
    const std::vector<unsigned char> bytes = base64_decode(fields[3]);
    STT_CHECK(bytes.size() == static_cast<size_t>(rows) * cols * sizeof(float),
              "dataset record '", utt.id, "': frame block size mismatch");
    utt.frames = RealMatrix(rows, cols);
    const float* f32 = reinterpret_cast<const float*>(bytes.data());
    for (size_t i = 0; i < utt.frames.data().size(); ++i) {
      utt.frames.data()[i] = static_cast<double>(f32[i]);
    }
    utts.push_back(std::move(utt));
  }
  return utts;
}

std::vector<std::string> load_text_lines(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  STT_CHECK(is.good(), "cannot open '", path, "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void save_text_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream os(path, std::ios::binary);
  STT_CHECK(os.good(), "cannot open '", path, "' for writing");
  for (const std::string& line : lines) os << line << "\n";
  STT_CHECK(os.good(), "failed writing '", path, "'");
}

std::string nearest_prototype_decode(const SyntheticSpec& spec, const RealMatrix& frames) {
  const RealMatrix protos = prototype_table(spec);
  std::string out;
  int prev = -2;
  for (int t = 0; t < frames.rows(); ++t) {
    const auto row = frames.row(t);
    int best = -1;  // silence (zero vector)
    double best_dist = 0.0;
    for (double v : row) best_dist += v * v;
    for (int s = 0; s < protos.rows(); ++s) {
      double dist = 0.0;
      for (int f = 0; f < frames.cols(); ++f) {
        const double d = row[f] - protos(s, f);
        dist += d * d;
      }
      if (dist < best_dist) {
        best_dist = dist;
        best = s;
      }
    }
    if (best >= 0 && best != prev) out.push_back(spec.symbols[best]);
    prev = best;
  }
  return out;
}

}  // namespace stt
