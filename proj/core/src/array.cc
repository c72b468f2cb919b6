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

#include "cora/array.h"

#include <cmath>
#include <functional>
#include <numeric>

#include "cora/errors.h"

namespace cora {
namespace {

std::size_t Product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

void CheckShape(const std::vector<std::size_t>& shape) {
  if (shape.empty() || shape.size() > 2) {
    throw DimensionError("array rank must be 1 or 2, got shape " +
                         ShapeString(shape));
  }
  for (std::size_t extent : shape) {
    if (extent == 0) {
      throw DimensionError("array extents must be positive, got shape " +
                           ShapeString(shape));
    }
  }
}

}  // namespace

Array::Array(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  CheckShape(shape_);
  data_.assign(Product(shape_), 0.0);
}

Array::Array(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  CheckShape(shape_);
  if (Product(shape_) != data_.size()) {
    throw DimensionError("shape " + ShapeString(shape_) + " holds " +
                         std::to_string(Product(shape_)) + " values, got " +
                         std::to_string(data_.size()));
  }
}

Array Array::Vector(std::initializer_list<double> values) {
  return Array({values.size()}, std::vector<double>(values));
}

Array Array::Matrix(std::size_t rows, std::size_t cols,
                    std::initializer_list<double> values) {
  return Array({rows, cols}, std::vector<double>(values));
}

Array Array::Filled(std::vector<std::size_t> shape, double value) {
  Array a(std::move(shape));
  a.Fill(value);
  return a;
}

void Array::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Array::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Array Array::Column(std::size_t c) const {
  Array out({rows()});
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

std::string ShapeString(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace cora
