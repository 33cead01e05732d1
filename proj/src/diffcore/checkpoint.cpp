// invgen/diffcore/checkpoint.cpp

// Copyright 2026  The invgen Authors

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

#include "invgen/diffcore/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "invgen/common/error.hpp"

namespace invgen::diffcore {

namespace {

constexpr char kMagic[8] = {'I', 'N', 'V', 'G', 'N', 'E', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

void PutU64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void PutU32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint64_t GetLe(std::istream& is, int bytes) {
  unsigned char b[8] = {};
  if (!is.read(reinterpret_cast<char*>(b), bytes)) {
    throw DataError("network checkpoint: truncated stream");
  }
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

void WriteNetwork(std::ostream& os, const Network& net) {
  os.write(kMagic, sizeof(kMagic));
  PutU32(os, kVersion);
  PutU32(os, static_cast<std::uint32_t>(net.num_layers()));
  for (const Layer& layer : net.layers()) {
    PutU32(os, static_cast<std::uint32_t>(layer.out_dim()));
    PutU32(os, static_cast<std::uint32_t>(layer.in_dim()));
    const char tag = static_cast<char>(layer.activation);
    os.write(&tag, 1);
    for (double w : layer.weight.data()) PutU64(os, std::bit_cast<std::uint64_t>(w));
    for (double b : layer.bias.data()) PutU64(os, std::bit_cast<std::uint64_t>(b));
  }
  if (!os) throw DataError("network checkpoint: write failed");
}

Network ReadNetwork(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("network checkpoint: bad magic");
  }
  const auto version = static_cast<std::uint32_t>(GetLe(is, 4));
  if (version != kVersion) {
    throw DataError("network checkpoint: unsupported version " +
                    std::to_string(version));
  }
  const auto num_layers = static_cast<std::uint32_t>(GetLe(is, 4));
  if (num_layers == 0 || num_layers > 1024) {
    throw DataError("network checkpoint: implausible layer count");
  }
  std::vector<Layer> layers;
  for (std::uint32_t l = 0; l < num_layers; ++l) {
    const auto out = static_cast<std::size_t>(GetLe(is, 4));
    const auto in = static_cast<std::size_t>(GetLe(is, 4));
    if (out == 0 || in == 0 || out * in > (std::size_t{1} << 28)) {
      throw DataError("network checkpoint: implausible layer shape");
    }
    const auto tag = static_cast<std::uint8_t>(GetLe(is, 1));
    if (tag > static_cast<std::uint8_t>(Activation::kIdentity)) {
      throw DataError("network checkpoint: unknown activation tag " +
                      std::to_string(tag));
    }
    Layer layer{Tensor(out, in), Tensor(out, 1), static_cast<Activation>(tag)};
    for (double& w : layer.weight.data()) w = std::bit_cast<double>(GetLe(is, 8));
    for (double& b : layer.bias.data()) b = std::bit_cast<double>(GetLe(is, 8));
    layers.push_back(std::move(layer));
  }
  try {
    return Network(std::move(layers));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("network checkpoint: ") + e.what());
  }
}

void SaveNetwork(const std::string& path, const Network& net) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path + " for writing");
  WriteNetwork(os, net);
}

Network LoadNetwork(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path);
  return ReadNetwork(is);
}

}  // namespace invgen::diffcore
