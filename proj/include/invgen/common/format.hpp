// invgen/common/format.hpp

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

#ifndef INVGEN_COMMON_FORMAT_HPP_
#define INVGEN_COMMON_FORMAT_HPP_

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace invgen {

/// Locale-independent shortest-general formatting with a fixed number of
/// significant digits ("0.25", "1e-05", "nan").
std::string FormatNumber(double value, int significant_digits = 10);

/// Splits on `sep`, trimming ASCII whitespace from each field.
std::vector<std::string> SplitTrimmed(std::string_view text, char sep);

/// Parses a double with the C locale; throws std::invalid_argument on junk.
double ParseNumber(std::string_view text);

/// Minimal CSV row writer: strings verbatim, numbers through FormatNumber.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void Header(std::initializer_list<std::string_view> names);
  void Header(const std::vector<std::string>& names);

  CsvWriter& Field(std::string_view text);
  CsvWriter& Field(double value);
  CsvWriter& Field(long long value);
  CsvWriter& Field(int value) { return Field(static_cast<long long>(value)); }
  CsvWriter& Field(std::size_t value) {
    return Field(static_cast<long long>(value));
  }
  void EndRow();

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace invgen

#endif  // INVGEN_COMMON_FORMAT_HPP_
