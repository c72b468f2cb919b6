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

#ifndef CORA_OPS_H_
#define CORA_OPS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "cora/array.h"
#include "cora/graph.h"
#include "cora/parameters.h"

namespace cora {

inline constexpr double kLayerNormEpsilon = 1e-5;
inline constexpr double kLogClamp = 1e-12;

// ---------------------------------------------------------------------------
// Array kernels. These are the forward definitions; graph ops below reuse
// them and add gradient rules.
// ---------------------------------------------------------------------------

// [m x k] * [k x n] -> [m x n]; a rank-1 right operand is a column vector
// and yields a rank-1 result.
Array MatMul(const Array& a, const Array& b);
Array Transpose(const Array& a);
// Numerically stable softmax over a vector (max subtracted first).
Array Softmax(const Array& x);
Array Sigmoid(const Array& x);
Array Tanh(const Array& x);
Array Add(const Array& a, const Array& b);
Array Sub(const Array& a, const Array& b);
Array Mul(const Array& a, const Array& b);
// (x - mean) / sqrt(var + eps) * gain + bias, population variance.
Array LayerNorm(const Array& x, const Array& gain, const Array& bias);

// ---------------------------------------------------------------------------
// Differentiable graph ops.
// ---------------------------------------------------------------------------

Var MatMul(Graph& g, Var a, Var b);
Var Transpose(Graph& g, Var a);
Var Softmax(Graph& g, Var x);
Var Sigmoid(Graph& g, Var x);
Var Tanh(Graph& g, Var x);
Var Add(Graph& g, Var a, Var b);
Var Sub(Graph& g, Var a, Var b);
Var Mul(Graph& g, Var a, Var b);
// scale * x + shift
Var Affine(Graph& g, Var x, double scale, double shift);
// x * mask with a constant mask (dropout).
Var MulConst(Graph& g, Var x, const Array& mask);
// Adds a vector of length rows(x) to every column of x.
Var AddBias(Graph& g, Var x, Var bias);
Var LayerNorm(Graph& g, Var x, Var gain, Var bias);

// Vectors concatenate end to end; matrices with equal column counts stack
// vertically.
Var ConcatRows(Graph& g, std::span<const Var> parts);
// Vectors of equal length become the columns of a matrix.
Var StackColumns(Graph& g, std::span<const Var> columns);
// Repeats a vector (or single-column matrix) as n identical columns.
Var BroadcastColumns(Graph& g, Var v, std::size_t n);
// Columns of an embedding table. Gradients scatter straight into
// table.grad, skipping frozen columns.
Var GatherColumns(Graph& g, Parameter& table, std::span<const std::size_t> indices);

// Same-length 1-D convolution over the columns of x [d_in x n]. The kernel
// is [d_out x window*d_in] with entry (o, q*d_in + i) weighting input row i
// at offset q - (window-1)/2. Zero padding; window must be odd.
Var Conv1d(Graph& g, Var x, Var kernel, Var bias, std::size_t window);

// Per-channel max over the column segments [0..p1], [p1+1..p2], [p2+1..n-1]
// with p1 = min(a, b), p2 = max(a, b). An empty segment pools to 0. Output is
// the 3*rows(h) concatenation, before any nonlinearity. The gradient goes to
// the first maximal column.
Var PiecewiseMaxPool(Graph& g, Var h, std::size_t pos_a, std::size_t pos_b);

// -log(max(p[index], kLogClamp)) as a scalar. Increments *clamp_count when
// the clamp is active.
Var NegLogPick(Graph& g, Var p, std::size_t index, int* clamp_count = nullptr);
// Sum of scalar nodes.
Var SumScalars(Graph& g, std::span<const Var> scalars);
// Sum of squares of every entry.
Var SquaredNorm(Graph& g, Var x);

}  // namespace cora

#endif  // CORA_OPS_H_
