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

#include <gtest/gtest.h>

#include "invariants.h"

namespace cora::testing {
namespace {

void ExpectHolds(const InvariantReport& rep) {
  EXPECT_GE(rep.cases, kInvariantCases) << rep.name;
  EXPECT_EQ(rep.failures, 0u) << rep.name << ": " << rep.first_failure;
}

TEST(PropertyTest, SoftmaxIsNormalized) { ExpectHolds(CheckSoftmaxNormalization(11)); }

TEST(PropertyTest, GateStaysInUnitIntervalAndFusionBetweenPaths) {
  ExpectHolds(CheckGateRange(12));
}

TEST(PropertyTest, PoolingIsConvexCombination) { ExpectHolds(CheckConvexPooling(13)); }

TEST(PropertyTest, BagPredictionIgnoresSentenceOrder) {
  ExpectHolds(CheckPermutationInvariance(14));
}

TEST(PropertyTest, HierarchyLevelsArePathPrefixes) {
  ExpectHolds(CheckHierarchyPrefixConsistency(15));
}

// The checks must be able to fail: a report with a recorded violation is
// not ok, and neither is one with too few cases.
TEST(PropertyTest, ReportsRejectViolationsAndShortRuns) {
  InvariantReport rep{"x"};
  rep.cases = kInvariantCases;
  EXPECT_TRUE(rep.ok());
  rep.Fail(3, "boom");
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.first_failure, "case 3: boom");
  EXPECT_FALSE(CheckSoftmaxNormalization(1, 10).ok());
}

}  // namespace
}  // namespace cora::testing
