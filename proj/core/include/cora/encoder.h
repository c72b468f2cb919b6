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

#ifndef CORA_ENCODER_H_
#define CORA_ENCODER_H_

#include <cstddef>

#include "cora/embedding.h"
#include "cora/graph.h"
#include "cora/parameters.h"
#include "cora/rng.h"

namespace cora {

struct EncoderDims {
  std::size_t channels = 230;  // d_c
  std::size_t window = 3;      // Q, odd
  std::size_t hidden_dim() const { return 3 * channels; }  // d_h
};

// PCNN kernel and bias.
struct PcnnParams {
  Parameter* kernel = nullptr;  // d_c x Q*d_x
  Parameter* bias = nullptr;    // d_c

  static PcnnParams Create(ParameterStore& store, const EncoderDims& dims,
                           std::size_t input_dim, Rng& rng);
  static PcnnParams Bind(ParameterStore& store);
};

// Same-length convolution H = conv(X) of shape d_c x n.
Var ConvolveSentence(Graph& g, Var embedded, const PcnnParams& params,
                     const EncoderDims& dims);

// s = tanh([pool(H1); pool(H2); pool(H3)]) where the segments split at the
// two entity positions (each entity closes its segment).
Var PiecewisePool(Graph& g, Var conv, std::size_t head_pos, std::size_t tail_pos);

// embed -> conv -> piecewise pool. Returns s of length d_h = 3 d_c.
Var EncodeSentence(Graph& g, const SentenceInput& sentence,
                   const EmbeddingParams& embedding, const EmbeddingDims& embed_dims,
                   double lambda, const PcnnParams& pcnn, const EncoderDims& dims);

}  // namespace cora

#endif  // CORA_ENCODER_H_
