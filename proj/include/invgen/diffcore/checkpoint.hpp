// invgen/diffcore/checkpoint.hpp

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

#ifndef INVGEN_DIFFCORE_CHECKPOINT_HPP_
#define INVGEN_DIFFCORE_CHECKPOINT_HPP_

#include <iosfwd>
#include <string>

#include "invgen/diffcore/network.hpp"

namespace invgen::diffcore {

// Binary layout, all integers little-endian:
//   "INVGNET1"  u32 version  u32 num_layers
//   per layer:  u32 out  u32 in  u8 activation  f64[out*in] weight  f64[out] bias

void WriteNetwork(std::ostream& os, const Network& net);
/// Throws DataError on bad magic, unknown version or activation tag, or a
/// truncated stream.
Network ReadNetwork(std::istream& is);

void SaveNetwork(const std::string& path, const Network& net);
Network LoadNetwork(const std::string& path);

}  // namespace invgen::diffcore

#endif  // INVGEN_DIFFCORE_CHECKPOINT_HPP_
