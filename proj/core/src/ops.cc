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

#include "cora/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cora/errors.h"

namespace cora {
namespace {

void RequireSameShape(const Array& a, const Array& b, const char* op) {
  if (!a.SameShape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         ShapeString(a.shape()) + " vs " +
                         ShapeString(b.shape()));
  }
}

void RequireVector(const Array& x, const char* op) {
  if (!x.is_vector()) {
    throw DimensionError(std::string(op) + ": expected a vector, got " +
                         ShapeString(x.shape()));
  }
}

void AddInto(Array* dst, const Array& src) {
  if (dst == nullptr) return;
  auto& d = dst->data();
  const auto& s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

// dst += a * b^T style helpers on raw storage.
// C[m x n] += A[m x k] * B[k x n]
void GemmAccumulate(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

double SigmoidScalar(double v) {
  if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------
// Array kernels
// ---------------------------------------------------------------------------

Array MatMul(const Array& a, const Array& b) {
  if (a.rank() != 2 || a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + ShapeString(a.shape()) +
                         " by " + ShapeString(b.shape()));
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Array out = b.is_vector() ? Array({m}) : Array({m, n});
  GemmAccumulate(a.data().data(), b.data().data(), out.data().data(), m, k, n);
  return out;
}

Array Transpose(const Array& a) {
  if (a.rank() != 2) {
    throw DimensionError("transpose: expected a matrix, got " +
                         ShapeString(a.shape()));
  }
  Array out({a.cols(), a.rows()});
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out.at(c, r) = a.at(r, c);
  }
  return out;
}

Array Softmax(const Array& x) {
  RequireVector(x, "softmax");
  Array out(x.shape());
  const double mx = *std::max_element(x.data().begin(), x.data().end());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - mx);
    total += out[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] /= total;
  return out;
}

Array Sigmoid(const Array& x) {
  Array out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = SigmoidScalar(x[i]);
  return out;
}

Array Tanh(const Array& x) {
  Array out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::tanh(x[i]);
  return out;
}

Array Add(const Array& a, const Array& b) {
  RequireSameShape(a, b, "add");
  Array out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Array Sub(const Array& a, const Array& b) {
  RequireSameShape(a, b, "sub");
  Array out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Array Mul(const Array& a, const Array& b) {
  RequireSameShape(a, b, "mul");
  Array out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Array LayerNorm(const Array& x, const Array& gain, const Array& bias) {
  RequireVector(x, "layer_norm");
  if (x.size() < 2) {
    throw DimensionError("layer_norm: need at least 2 entries, got " +
                         ShapeString(x.shape()));
  }
  RequireSameShape(x, gain, "layer_norm gain");
  RequireSameShape(x, bias, "layer_norm bias");
  const double d = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x.values()) mean += v;
  mean /= d;
  double var = 0.0;
  for (double v : x.values()) var += (v - mean) * (v - mean);
  var /= d;
  const double inv_std = 1.0 / std::sqrt(var + kLayerNormEpsilon);
  Array out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = (x[i] - mean) * inv_std * gain[i] + bias[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph ops
// ---------------------------------------------------------------------------

Var MatMul(Graph& g, Var a, Var b) {
  Array out = MatMul(g.value(a), g.value(b));
  return g.Record(std::move(out), {a, b}, [](BackwardContext& ctx) {
    const Array& av = ctx.parent_value(0);
    const Array& bv = ctx.parent_value(1);
    const Array& go = ctx.grad();
    const std::size_t m = av.rows(), k = av.cols(), n = bv.cols();
    if (Array* ga = ctx.parent_grad(0)) {
      // dA = dC * B^T
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += go[i * n + j] * bv[p * n + j];
          (*ga)[i * k + p] += acc;
        }
      }
    }
    if (Array* gb = ctx.parent_grad(1)) {
      // dB = A^T * dC
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = av[i * k + p];
          for (std::size_t j = 0; j < n; ++j) (*gb)[p * n + j] += aip * go[i * n + j];
        }
      }
    }
  });
}

Var Transpose(Graph& g, Var a) {
  return g.Record(Transpose(g.value(a)), {a}, [](BackwardContext& ctx) {
    Array* ga = ctx.parent_grad(0);
    const Array& go = ctx.grad();
    for (std::size_t r = 0; r < go.rows(); ++r) {
      for (std::size_t c = 0; c < go.cols(); ++c) ga->at(c, r) += go.at(r, c);
    }
  });
}

Var Softmax(Graph& g, Var x) {
  if (g.value(x).size() == 0) throw DimensionError("softmax: empty input");
  return g.Record(Softmax(g.value(x)), {x}, [](BackwardContext& ctx) {
    const Array& y = ctx.value();
    const Array& go = ctx.grad();
    double dot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += go[i] * y[i];
    Array* gx = ctx.parent_grad(0);
    for (std::size_t i = 0; i < y.size(); ++i) (*gx)[i] += y[i] * (go[i] - dot);
  });
}

Var Sigmoid(Graph& g, Var x) {
  return g.Record(Sigmoid(g.value(x)), {x}, [](BackwardContext& ctx) {
    const Array& y = ctx.value();
    const Array& go = ctx.grad();
    Array* gx = ctx.parent_grad(0);
    for (std::size_t i = 0; i < y.size(); ++i) (*gx)[i] += go[i] * y[i] * (1.0 - y[i]);
  });
}

Var Tanh(Graph& g, Var x) {
  return g.Record(Tanh(g.value(x)), {x}, [](BackwardContext& ctx) {
    const Array& y = ctx.value();
    const Array& go = ctx.grad();
    Array* gx = ctx.parent_grad(0);
    for (std::size_t i = 0; i < y.size(); ++i) (*gx)[i] += go[i] * (1.0 - y[i] * y[i]);
  });
}

Var Add(Graph& g, Var a, Var b) {
  return g.Record(Add(g.value(a), g.value(b)), {a, b}, [](BackwardContext& ctx) {
    AddInto(ctx.parent_grad(0), ctx.grad());
    AddInto(ctx.parent_grad(1), ctx.grad());
  });
}

Var Sub(Graph& g, Var a, Var b) {
  return g.Record(Sub(g.value(a), g.value(b)), {a, b}, [](BackwardContext& ctx) {
    AddInto(ctx.parent_grad(0), ctx.grad());
    if (Array* gb = ctx.parent_grad(1)) {
      const Array& go = ctx.grad();
      for (std::size_t i = 0; i < go.size(); ++i) (*gb)[i] -= go[i];
    }
  });
}

Var Mul(Graph& g, Var a, Var b) {
  return g.Record(Mul(g.value(a), g.value(b)), {a, b}, [](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    if (Array* ga = ctx.parent_grad(0)) {
      const Array& bv = ctx.parent_value(1);
      for (std::size_t i = 0; i < go.size(); ++i) (*ga)[i] += go[i] * bv[i];
    }
    if (Array* gb = ctx.parent_grad(1)) {
      const Array& av = ctx.parent_value(0);
      for (std::size_t i = 0; i < go.size(); ++i) (*gb)[i] += go[i] * av[i];
    }
  });
}

Var Affine(Graph& g, Var x, double scale, double shift) {
  const Array& xv = g.value(x);
  Array out(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = scale * xv[i] + shift;
  return g.Record(std::move(out), {x}, [scale](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    Array* gx = ctx.parent_grad(0);
    for (std::size_t i = 0; i < go.size(); ++i) (*gx)[i] += scale * go[i];
  });
}

Var MulConst(Graph& g, Var x, const Array& mask) {
  return g.Record(Mul(g.value(x), mask), {x}, [mask](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    Array* gx = ctx.parent_grad(0);
    for (std::size_t i = 0; i < go.size(); ++i) (*gx)[i] += go[i] * mask[i];
  });
}

Var AddBias(Graph& g, Var x, Var bias) {
  const Array& xv = g.value(x);
  const Array& bv = g.value(bias);
  if (!bv.is_vector() || bv.size() != xv.rows()) {
    throw DimensionError("add_bias: bias " + ShapeString(bv.shape()) +
                         " does not match rows of " + ShapeString(xv.shape()));
  }
  Array out = xv;
  const std::size_t cols = xv.cols();
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] += bv[r];
  }
  return g.Record(std::move(out), {x, bias}, [](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    AddInto(ctx.parent_grad(0), go);
    if (Array* gb = ctx.parent_grad(1)) {
      const std::size_t cols = go.cols();
      for (std::size_t r = 0; r < gb->size(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += go[r * cols + c];
        (*gb)[r] += acc;
      }
    }
  });
}

Var LayerNorm(Graph& g, Var x, Var gain, Var bias) {
  Array out = LayerNorm(g.value(x), g.value(gain), g.value(bias));
  return g.Record(std::move(out), {x, gain, bias}, [](BackwardContext& ctx) {
    const Array& xv = ctx.parent_value(0);
    const Array& gv = ctx.parent_value(1);
    const Array& go = ctx.grad();
    const std::size_t d = xv.size();
    const double dd = static_cast<double>(d);
    double mean = 0.0;
    for (double v : xv.values()) mean += v;
    mean /= dd;
    double var = 0.0;
    for (double v : xv.values()) var += (v - mean) * (v - mean);
    var /= dd;
    const double inv_std = 1.0 / std::sqrt(var + kLayerNormEpsilon);
    std::vector<double> xhat(d), dxhat(d);
    double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      xhat[i] = (xv[i] - mean) * inv_std;
      dxhat[i] = go[i] * gv[i];
      mean_dxhat += dxhat[i];
      mean_dxhat_xhat += dxhat[i] * xhat[i];
    }
    mean_dxhat /= dd;
    mean_dxhat_xhat /= dd;
    if (Array* gx = ctx.parent_grad(0)) {
      for (std::size_t i = 0; i < d; ++i) {
        (*gx)[i] += inv_std * (dxhat[i] - mean_dxhat - xhat[i] * mean_dxhat_xhat);
      }
    }
    if (Array* gg = ctx.parent_grad(1)) {
      for (std::size_t i = 0; i < d; ++i) (*gg)[i] += go[i] * xhat[i];
    }
    AddInto(ctx.parent_grad(2), go);
  });
}

Var ConcatRows(Graph& g, std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat: no operands");
  const Array& first = g.value(parts[0]);
  const bool vectors = first.is_vector();
  const std::size_t cols = first.cols();
  std::size_t rows = 0;
  for (Var p : parts) {
    const Array& v = g.value(p);
    if (v.is_vector() != vectors || v.cols() != cols) {
      throw DimensionError("concat: incompatible operand " +
                           ShapeString(v.shape()) + " after " +
                           ShapeString(first.shape()));
    }
    rows += v.rows();
  }
  Array out = vectors ? Array({rows}) : Array({rows, cols});
  std::size_t offset = 0;
  std::vector<std::size_t> offsets;
  for (Var p : parts) {
    const Array& v = g.value(p);
    std::copy(v.data().begin(), v.data().end(), out.data().begin() + offset);
    offsets.push_back(offset);
    offset += v.size();
  }
  std::vector<Var> parents(parts.begin(), parts.end());
  return g.Record(std::move(out), parents, [offsets](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      Array* gp = ctx.parent_grad(i);
      if (gp == nullptr) continue;
      for (std::size_t j = 0; j < gp->size(); ++j) (*gp)[j] += go[offsets[i] + j];
    }
  });
}

Var StackColumns(Graph& g, std::span<const Var> columns) {
  if (columns.empty()) throw DimensionError("stack_columns: no operands");
  const std::size_t d = g.value(columns[0]).size();
  const std::size_t m = columns.size();
  Array out({d, m});
  for (std::size_t c = 0; c < m; ++c) {
    const Array& v = g.value(columns[c]);
    if (!v.is_vector() || v.size() != d) {
      throw DimensionError("stack_columns: column " + ShapeString(v.shape()) +
                           " does not match length " + std::to_string(d));
    }
    for (std::size_t r = 0; r < d; ++r) out.at(r, c) = v[r];
  }
  std::vector<Var> parents(columns.begin(), columns.end());
  return g.Record(std::move(out), parents, [m](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    for (std::size_t c = 0; c < m; ++c) {
      Array* gp = ctx.parent_grad(c);
      if (gp == nullptr) continue;
      for (std::size_t r = 0; r < gp->size(); ++r) (*gp)[r] += go.at(r, c);
    }
  });
}

Var BroadcastColumns(Graph& g, Var v, std::size_t n) {
  const Array& vv = g.value(v);
  if (vv.cols() != 1) {
    throw DimensionError("broadcast_columns: expected a single column, got " +
                         ShapeString(vv.shape()));
  }
  if (n == 0) throw DimensionError("broadcast_columns: zero columns");
  Array out({vv.size(), n});
  for (std::size_t r = 0; r < vv.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) out.at(r, c) = vv[r];
  }
  return g.Record(std::move(out), {v}, [](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    Array* gv = ctx.parent_grad(0);
    for (std::size_t r = 0; r < go.rows(); ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < go.cols(); ++c) acc += go.at(r, c);
      (*gv)[r] += acc;
    }
  });
}

Var GatherColumns(Graph& g, Parameter& table, std::span<const std::size_t> indices) {
  const Array& tv = table.value;
  if (tv.rank() != 2) {
    throw DimensionError("gather: table must be a matrix, got " +
                         ShapeString(tv.shape()));
  }
  if (indices.empty()) throw DimensionError("gather: no indices");
  const std::size_t d = tv.rows();
  Array out({d, indices.size()});
  for (std::size_t c = 0; c < indices.size(); ++c) {
    if (indices[c] >= tv.cols()) {
      throw DimensionError("gather: index " + std::to_string(indices[c]) +
                           " outside table " + ShapeString(tv.shape()));
    }
    for (std::size_t r = 0; r < d; ++r) out.at(r, c) = tv.at(r, indices[c]);
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  // The table is not a tape node, so a dummy leaf makes the op trainable.
  Var anchor = g.Leaf(Array({1}));
  Parameter* param = &table;
  return g.Record(std::move(out), {anchor}, [param, idx](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    const auto& frozen = param->frozen_columns;
    for (std::size_t c = 0; c < idx.size(); ++c) {
      if (std::find(frozen.begin(), frozen.end(), idx[c]) != frozen.end()) continue;
      for (std::size_t r = 0; r < go.rows(); ++r) {
        param->grad.at(r, idx[c]) += go.at(r, c);
      }
    }
  });
}

Var Conv1d(Graph& g, Var x, Var kernel, Var bias, std::size_t window) {
  if (window % 2 == 0) {
    throw ConfigError("conv1d: window " + std::to_string(window) +
                      " must be odd for centred same-length output");
  }
  const Array& xv = g.value(x);
  const Array& kv = g.value(kernel);
  const Array& bv = g.value(bias);
  if (xv.rank() != 2) {
    throw DimensionError("conv1d: input must be a matrix, got " +
                         ShapeString(xv.shape()));
  }
  const std::size_t d_in = xv.rows(), n = xv.cols();
  if (kv.rank() != 2 || kv.cols() != window * d_in) {
    throw DimensionError("conv1d: kernel " + ShapeString(kv.shape()) +
                         " does not match window " + std::to_string(window) +
                         " over input " + ShapeString(xv.shape()));
  }
  const std::size_t d_out = kv.rows();
  if (!bv.is_vector() || bv.size() != d_out) {
    throw DimensionError("conv1d: bias " + ShapeString(bv.shape()) +
                         " does not match " + std::to_string(d_out) + " channels");
  }
  const long pad = static_cast<long>((window - 1) / 2);
  // im2col: column t holds the window around position t.
  Array cols({window * d_in, n});
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t q = 0; q < window; ++q) {
      const long src = static_cast<long>(t) + static_cast<long>(q) - pad;
      if (src < 0 || src >= static_cast<long>(n)) continue;
      for (std::size_t i = 0; i < d_in; ++i) {
        cols.at(q * d_in + i, t) = xv.at(i, static_cast<std::size_t>(src));
      }
    }
  }
  Array out = MatMul(kv, cols);
  for (std::size_t o = 0; o < d_out; ++o) {
    for (std::size_t t = 0; t < n; ++t) out.at(o, t) += bv[o];
  }
  return g.Record(
      std::move(out), {x, kernel, bias},
      [cols = std::move(cols), window, pad](BackwardContext& ctx) {
        const Array& go = ctx.grad();
        const Array& kv = ctx.parent_value(1);
        const std::size_t d_out = go.rows(), n = go.cols();
        const std::size_t k = cols.rows();
        const std::size_t d_in = k / window;
        if (Array* gk = ctx.parent_grad(1)) {
          for (std::size_t o = 0; o < d_out; ++o) {
            for (std::size_t p = 0; p < k; ++p) {
              double acc = 0.0;
              for (std::size_t t = 0; t < n; ++t) acc += go.at(o, t) * cols.at(p, t);
              gk->at(o, p) += acc;
            }
          }
        }
        if (Array* gb = ctx.parent_grad(2)) {
          for (std::size_t o = 0; o < d_out; ++o) {
            double acc = 0.0;
            for (std::size_t t = 0; t < n; ++t) acc += go.at(o, t);
            (*gb)[o] += acc;
          }
        }
        if (Array* gx = ctx.parent_grad(0)) {
          for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t q = 0; q < window; ++q) {
              const long src = static_cast<long>(t) + static_cast<long>(q) - pad;
              if (src < 0 || src >= static_cast<long>(n)) continue;
              for (std::size_t i = 0; i < d_in; ++i) {
                double acc = 0.0;
                for (std::size_t o = 0; o < d_out; ++o) {
                  acc += kv.at(o, q * d_in + i) * go.at(o, t);
                }
                gx->at(i, static_cast<std::size_t>(src)) += acc;
              }
            }
          }
        }
      });
}

Var PiecewiseMaxPool(Graph& g, Var h, std::size_t pos_a, std::size_t pos_b) {
  const Array& hv = g.value(h);
  if (hv.rank() != 2) {
    throw DimensionError("piecewise_pool: input must be a matrix, got " +
                         ShapeString(hv.shape()));
  }
  const std::size_t channels = hv.rows(), n = hv.cols();
  if (pos_a >= n || pos_b >= n) {
    throw InputError("piecewise_pool: entity positions " + std::to_string(pos_a) +
                     ", " + std::to_string(pos_b) + " outside length " +
                     std::to_string(n));
  }
  if (pos_a == pos_b) {
    throw InputError("piecewise_pool: head and tail share position " +
                     std::to_string(pos_a));
  }
  const std::size_t p1 = std::min(pos_a, pos_b), p2 = std::max(pos_a, pos_b);
  const std::size_t begins[3] = {0, p1 + 1, p2 + 1};
  const std::size_t ends[3] = {p1 + 1, p2 + 1, n};
  Array out({3 * channels});
  // argmax column per output entry; n marks an empty segment.
  std::vector<std::size_t> argmax(3 * channels, n);
  for (std::size_t s = 0; s < 3; ++s) {
    if (begins[s] >= ends[s]) continue;
    for (std::size_t c = 0; c < channels; ++c) {
      std::size_t best = begins[s];
      for (std::size_t t = begins[s] + 1; t < ends[s]; ++t) {
        if (hv.at(c, t) > hv.at(c, best)) best = t;
      }
      out[s * channels + c] = hv.at(c, best);
      argmax[s * channels + c] = best;
    }
  }
  return g.Record(std::move(out), {h}, [argmax, channels, n](BackwardContext& ctx) {
    const Array& go = ctx.grad();
    Array* gh = ctx.parent_grad(0);
    for (std::size_t j = 0; j < argmax.size(); ++j) {
      if (argmax[j] == n) continue;
      gh->at(j % channels, argmax[j]) += go[j];
    }
  });
}

Var NegLogPick(Graph& g, Var p, std::size_t index, int* clamp_count) {
  const Array& pv = g.value(p);
  RequireVector(pv, "neg_log_pick");
  if (index >= pv.size()) {
    throw InputError("neg_log_pick: label " + std::to_string(index) +
                     " outside " + std::to_string(pv.size()) + " classes");
  }
  const bool clamped = !(pv[index] > kLogClamp);
  if (clamped && clamp_count != nullptr) ++*clamp_count;
  const double picked = clamped ? kLogClamp : pv[index];
  Array out({1});
  out[0] = -std::log(picked);
  return g.Record(std::move(out), {p}, [index, clamped](BackwardContext& ctx) {
    if (clamped) return;
    Array* gp = ctx.parent_grad(0);
    (*gp)[index] -= ctx.grad()[0] / ctx.parent_value(0)[index];
  });
}

Var SumScalars(Graph& g, std::span<const Var> scalars) {
  Array out({1});
  for (Var s : scalars) {
    const Array& v = g.value(s);
    if (v.size() != 1) {
      throw DimensionError("sum_scalars: operand " + ShapeString(v.shape()) +
                           " is not a scalar");
    }
    out[0] += v[0];
  }
  std::vector<Var> parents(scalars.begin(), scalars.end());
  const std::size_t count = parents.size();
  return g.Record(std::move(out), parents, [count](BackwardContext& ctx) {
    for (std::size_t i = 0; i < count; ++i) {
      if (Array* gp = ctx.parent_grad(i)) (*gp)[0] += ctx.grad()[0];
    }
  });
}

Var SquaredNorm(Graph& g, Var x) {
  const Array& xv = g.value(x);
  Array out({1});
  for (double v : xv.values()) out[0] += v * v;
  return g.Record(std::move(out), {x}, [](BackwardContext& ctx) {
    const Array& xv = ctx.parent_value(0);
    Array* gx = ctx.parent_grad(0);
    const double go = ctx.grad()[0];
    for (std::size_t i = 0; i < xv.size(); ++i) (*gx)[i] += 2.0 * go * xv[i];
  });
}

}  // namespace cora
