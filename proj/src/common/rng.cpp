// invgen/common/rng.cpp

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

#include "invgen/common/rng.hpp"

#include <stdexcept>

namespace invgen {

std::size_t CounterRng::Index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("CounterRng::Index: empty range");
  // Lemire's multiply-shift with rejection; unbiased for every n.
  const std::uint64_t range = n;
  while (true) {
    const unsigned __int128 m =
        static_cast<unsigned __int128>((*this)()) * range;
    const std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low >= range || low >= (-range) % range) {
      return static_cast<std::size_t>(m >> 64);
    }
  }
}

CounterRng CounterRng::Fork(std::uint64_t stream) const {
  return CounterRng(Mix(key_ ^ Mix(stream + kGolden)), 0, 0);
}

}  // namespace invgen
