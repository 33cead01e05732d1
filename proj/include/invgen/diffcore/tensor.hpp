// invgen/diffcore/tensor.hpp

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

#ifndef INVGEN_DIFFCORE_TENSOR_HPP_
#define INVGEN_DIFFCORE_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace invgen::diffcore {

/// Dense row-major matrix of doubles. Vectors are 1 x n rows (or n x 1
/// columns for biases); batches stack samples as rows.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> data);

  /// Nested-list constructor, e.g. Tensor::FromRows({{1, 2}, {3, 4}}).
  static Tensor FromRows(
      std::initializer_list<std::initializer_list<double>> rows);
  static Tensor Row(std::vector<double> values);
  static Tensor Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  /// Copies row r into a new 1 x cols tensor.
  Tensor RowCopy(std::size_t r) const;
  /// Gathers the listed rows into a new tensor.
  Tensor Gather(std::span<const std::size_t> row_indices) const;

  Tensor Transposed() const;
  void Fill(double value);
  bool AllFinite() const;
  double SquaredNorm() const;
  bool SameShape(const Tensor& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  std::string ShapeString() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// out = a * b^T, shapes (n x k) * (m x k)^T -> (n x m).
Tensor MatMulTransB(const Tensor& a, const Tensor& b);
/// out = a * b, shapes (n x k) * (k x m) -> (n x m).
Tensor MatMul(const Tensor& a, const Tensor& b);
/// out = a^T * b, shapes (k x n)^T * (k x m) -> (n x m).
Tensor MatMulTransA(const Tensor& a, const Tensor& b);

/// Throws std::invalid_argument naming `what` if any entry is NaN/Inf.
void RequireFinite(const Tensor& t, const char* what);

}  // namespace invgen::diffcore

#endif  // INVGEN_DIFFCORE_TENSOR_HPP_
