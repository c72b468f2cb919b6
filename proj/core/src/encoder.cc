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

#include "cora/encoder.h"

#include <cmath>

#include "cora/errors.h"
#include "cora/ops.h"

namespace cora {

PcnnParams PcnnParams::Create(ParameterStore& store, const EncoderDims& dims,
                              std::size_t input_dim, Rng& rng) {
  if (dims.window % 2 == 0) {
    throw ConfigError("window " + std::to_string(dims.window) + " must be odd");
  }
  const std::size_t fan_in = dims.window * input_dim;
  const double limit = std::sqrt(3.0 / static_cast<double>(fan_in));
  Array kernel({dims.channels, fan_in});
  for (double& v : kernel.values()) v = rng.Uniform(-limit, limit);
  store.Add("encoder.conv_w", std::move(kernel));
  store.Add("encoder.conv_b", Array({dims.channels}));
  return Bind(store);
}

PcnnParams PcnnParams::Bind(ParameterStore& store) {
  return {&store.Get("encoder.conv_w"), &store.Get("encoder.conv_b")};
}

Var ConvolveSentence(Graph& g, Var embedded, const PcnnParams& params,
                     const EncoderDims& dims) {
  return Conv1d(g, embedded, g.Param(*params.kernel), g.Param(*params.bias),
                dims.window);
}

Var PiecewisePool(Graph& g, Var conv, std::size_t head_pos, std::size_t tail_pos) {
  return Tanh(g, PiecewiseMaxPool(g, conv, head_pos, tail_pos));
}

Var EncodeSentence(Graph& g, const SentenceInput& sentence,
                   const EmbeddingParams& embedding, const EmbeddingDims& embed_dims,
                   double lambda, const PcnnParams& pcnn, const EncoderDims& dims) {
  EmbeddingTrace trace = EmbedSentence(g, sentence, embedding, embed_dims, lambda);
  Var conv = ConvolveSentence(g, trace.fused, pcnn, dims);
  return PiecewisePool(g, conv, sentence.head_pos, sentence.tail_pos);
}

}  // namespace cora
