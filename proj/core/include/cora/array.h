// Copyright 2026 The CoRA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CORA_ARRAY_H_
#define CORA_ARRAY_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cora {

// Dense row-major array of doubles with rank 1 or 2. A rank-1 array of
// extent d acts as a column vector in matrix products.
class Array {
 public:
  Array() = default;
  explicit Array(std::vector<std::size_t> shape);
  Array(std::vector<std::size_t> shape, std::vector<double> data);

  static Array Vector(std::initializer_list<double> values);
  static Array Matrix(std::size_t rows, std::size_t cols,
                      std::initializer_list<double> values);
  static Array Zeros(std::vector<std::size_t> shape) { return Array(std::move(shape)); }
  static Array Filled(std::vector<std::size_t> shape, double value);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  // Row count; for vectors, the length.
  std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  // Column count; 1 for vectors.
  std::size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }
  bool is_vector() const { return shape_.size() == 1; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void Fill(double value);
  bool AllFinite() const;
  bool SameShape(const Array& other) const { return shape_ == other.shape_; }

  // Column c of a matrix as a vector.
  Array Column(std::size_t c) const;

  bool operator==(const Array& other) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::string ShapeString(const std::vector<std::size_t>& shape);

}  // namespace cora

#endif  // CORA_ARRAY_H_
