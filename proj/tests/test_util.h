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

#ifndef CORA_TESTS_TEST_UTIL_H_
#define CORA_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <cstddef>
#include <string>
#include <vector>

#include "cora/array.h"
#include "cora/embedding.h"
#include "cora/model.h"
#include "cora/rng.h"

namespace cora::testing {

inline Array RandomArray(Rng& rng, std::vector<std::size_t> shape, double lo = -1.0,
                         double hi = 1.0) {
  Array a(std::move(shape));
  for (double& v : a.values()) v = rng.Uniform(lo, hi);
  return a;
}

inline void ExpectNear(const Array& got, const Array& want, double tol,
                       const std::string& what = "") {
  ASSERT_EQ(got.shape(), want.shape()) << what;
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i], want[i], tol) << what << " at " << i;
  }
}

// A random sentence of length n with distinct entity positions.
inline SentenceInput RandomSentence(Rng& rng, std::size_t n, std::size_t vocab_size) {
  SentenceInput s;
  for (std::size_t i = 0; i < n; ++i) s.token_ids.push_back(1 + rng.Index(vocab_size - 1));
  s.head_pos = rng.Index(n);
  do {
    s.tail_pos = rng.Index(n);
  } while (s.tail_pos == s.head_pos);
  return s;
}

// d_w=4, d_p=2, d_c=4, N0=5 with levels {5, 3, 2}.
inline ModelConfig TinyModelConfig(std::size_t levels = 3) {
  ModelConfig c;
  c.embedding.word_dim = 4;
  c.embedding.position_dim = 2;
  c.embedding.max_distance = 5;
  c.encoder.channels = 4;
  c.encoder.window = 3;
  c.dropout_p = 0.0;
  const std::vector<std::size_t> all = {5, 3, 2};
  c.level_sizes.assign(all.begin(), all.begin() + static_cast<long>(levels));
  return c;
}

inline constexpr std::size_t kTinyVocab = 12;

}  // namespace cora::testing

#endif  // CORA_TESTS_TEST_UTIL_H_
