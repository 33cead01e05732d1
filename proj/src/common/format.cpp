// invgen/common/format.cpp

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

#include "invgen/common/format.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace invgen {

std::string FormatNumber(double value, int significant_digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::general, significant_digits);
  return std::string(buf, res.ptr);
}

std::vector<std::string> SplitTrimmed(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(sep, start);
    std::string_view field = text.substr(
        start, end == std::string_view::npos ? std::string_view::npos
                                             : end - start);
    const auto first = field.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
      out.emplace_back();
    } else {
      const auto last = field.find_last_not_of(" \t\r\n");
      out.emplace_back(field.substr(first, last - first + 1));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

double ParseNumber(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  const auto last = text.find_last_not_of(" \t");
  if (first == std::string_view::npos) {
    throw std::invalid_argument("empty number");
  }
  text = text.substr(first, last - first + 1);
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

void CsvWriter::Header(std::initializer_list<std::string_view> names) {
  for (auto n : names) Field(n);
  EndRow();
}

void CsvWriter::Header(const std::vector<std::string>& names) {
  for (const auto& n : names) Field(std::string_view(n));
  EndRow();
}

CsvWriter& CsvWriter::Field(std::string_view text) {
  if (!first_) out_ << ',';
  out_ << text;
  first_ = false;
  return *this;
}

CsvWriter& CsvWriter::Field(double value) {
  return Field(std::string_view(FormatNumber(value)));
}

CsvWriter& CsvWriter::Field(long long value) {
  return Field(std::string_view(std::to_string(value)));
}

void CsvWriter::EndRow() {
  out_ << '\n';
  first_ = true;
}

}  // namespace invgen
