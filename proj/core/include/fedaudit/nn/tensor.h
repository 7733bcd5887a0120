/*
 * Copyright 2026 The FedAudit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDAUDIT_NN_TENSOR_H_
#define FEDAUDIT_NN_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fedaudit::nn {

// Dense row-major matrix of doubles. Rows are records (or output units for
// weight matrices), columns are features.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Tensor2(size_t rows, size_t cols, std::vector<double> data);

  // Builds a tensor from nested rows; all rows must have equal length.
  static Tensor2 FromRows(const std::vector<std::vector<double>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  // Copies the given rows, in order, into a new tensor.
  Tensor2 GatherRows(std::span<const size_t> indices) const;

  bool SameShape(const Tensor2& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool AllFinite() const;

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace fedaudit::nn

#endif  // FEDAUDIT_NN_TENSOR_H_
