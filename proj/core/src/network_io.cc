// core/src/network_io.cc

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

#include <bit>
#include <cstring>
#include <fstream>

#include "stt/error.h"
#include "stt/network.h"

namespace stt {

namespace {

constexpr const char* kMagic = "stt-model";
constexpr int kFormatVersion = 1;

uint64_t fnv1a(const std::string& text) {
  uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

static_assert(std::endian::native == std::endian::little,
              "parameter blocks are little-endian f64; big-endian hosts need a swap");

}  // namespace

uint64_t spec_hash(const ModelSpec& spec) { return fnv1a(spec.to_json()); }

void save_model(const std::string& path, const ModelSpec& spec, const Parameters& params) {
  spec.validate();
  STT_CHECK(params.flat.size() == params.layout->total_size(), "save_model: bad parameter vector");
  std::ofstream os(path, std::ios::binary);
  STT_CHECK(os.good(), "cannot open '", path, "' for writing");
  const std::string spec_json = spec.to_json();
  os << kMagic << " " << kFormatVersion << "\n";
  os << "spec-hash " << std::hex << fnv1a(spec_json) << std::dec << "\n";
  os << spec_json << "\n";
  os << "params " << params.flat.size() << "\n";
  os.write(reinterpret_cast<const char*>(params.flat.data()),
           static_cast<std::streamsize>(params.flat.size() * sizeof(double)));
  STT_CHECK(os.good(), "failed writing '", path, "'");
}

std::pair<ModelSpec, Parameters> load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  STT_CHECK(is.good(), "cannot open model file '", path, "'");

  std::string magic;
  int version = -1;
  is >> magic >> version;
  STT_CHECK(magic == kMagic, "model file: bad magic '", magic, "'");
  STT_CHECK(version == kFormatVersion, "model file: unsupported version ", version);

  std::string key;
  uint64_t stored_hash = 0;
  is >> key >> std::hex >> stored_hash >> std::dec;
  STT_CHECK(key == "spec-hash", "model file: missing spec hash");
  is.ignore(1, '\n');

  std::string spec_json;
  std::getline(is, spec_json);
  STT_CHECK(!spec_json.empty(), "model file: missing spec");
  STT_CHECK(fnv1a(spec_json) == stored_hash, "model file: spec hash mismatch");
  ModelSpec spec = ModelSpec::from_json(spec_json);

  size_t count = 0;
  is >> key >> count;
  STT_CHECK(key == "params", "model file: missing parameter count");
  is.ignore(1, '\n');

  Parameters params;
  params.layout = make_layout(spec);
  STT_CHECK(count == params.layout->total_size(), "model file: parameter count ", count,
            " does not match layout ", params.layout->total_size());
  params.flat.resize(count);
  is.read(reinterpret_cast<char*>(params.flat.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  STT_CHECK(is.gcount() == static_cast<std::streamsize>(count * sizeof(double)),
            "model file: truncated parameter block");
  return {std::move(spec), std::move(params)};
}

}  // namespace stt
