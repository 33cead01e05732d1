// invgen/diffcore/tensor.cpp

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

#include "invgen/diffcore/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invgen::diffcore {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("Tensor: data length " +
                                std::to_string(data_.size()) +
                                " does not match shape " + ShapeString());
  }
}

Tensor Tensor::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("Tensor: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor(r, c, std::move(data));
}

Tensor Tensor::Row(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor(1, n, std::move(values));
}

Tensor Tensor::Identity(std::size_t n) {
  Tensor t(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

Tensor Tensor::RowCopy(std::size_t r) const {
  if (r >= rows_) throw std::out_of_range("Tensor::RowCopy");
  auto src = row(r);
  return Tensor(1, cols_, std::vector<double>(src.begin(), src.end()));
}

Tensor Tensor::Gather(std::span<const std::size_t> row_indices) const {
  Tensor out(row_indices.size(), cols_);
  for (std::size_t i = 0; i < row_indices.size(); ++i) {
    if (row_indices[i] >= rows_) throw std::out_of_range("Tensor::Gather");
    auto src = row(row_indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Tensor Tensor::Transposed() const {
  Tensor out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

void Tensor::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double Tensor::SquaredNorm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

std::string Tensor::ShapeString() const {
  return "(" + std::to_string(rows_) + " x " + std::to_string(cols_) + ")";
}

Tensor MatMulTransB(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("MatMulTransB: inner dims " + a.ShapeString() +
                                " vs " + b.ShapeString());
  }
  Tensor out(a.rows(), b.rows());
  const std::size_t k = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i).data();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* bj = b.row(j).data();
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += ai[t] * bj[t];
      out(i, j) = s;
    }
  }
  return out;
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("MatMul: inner dims " + a.ShapeString() +
                                " vs " + b.ShapeString());
  }
  Tensor out(a.rows(), b.cols());
  const std::size_t m = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* oi = out.row(i).data();
    for (std::size_t t = 0; t < a.cols(); ++t) {
      const double s = a(i, t);
      const double* bt = b.row(t).data();
      for (std::size_t j = 0; j < m; ++j) oi[j] += s * bt[j];
    }
  }
  return out;
}

Tensor MatMulTransA(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("MatMulTransA: inner dims " + a.ShapeString() +
                                " vs " + b.ShapeString());
  }
  Tensor out(a.cols(), b.cols());
  const std::size_t m = b.cols();
  for (std::size_t t = 0; t < a.rows(); ++t) {
    const double* bt = b.row(t).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double s = a(t, i);
      double* oi = out.row(i).data();
      for (std::size_t j = 0; j < m; ++j) oi[j] += s * bt[j];
    }
  }
  return out;
}

void RequireFinite(const Tensor& t, const char* what) {
  if (!t.AllFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace invgen::diffcore
