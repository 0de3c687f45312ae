// Copyright 2026 The mvflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mvflow/complete.h"

#include <bit>
#include <random>

#include "doctest.h"
#include "mvflow/errors.h"

namespace mvflow {
namespace {

TEST_CASE("bmvc: empty past cell takes the negated future vector") {
  SparseMotionField past(0, 1, 1);
  SparseMotionField future(0, 1, 1);
  future.at(0, 0) = Cell::Coded({2.0f, 3.0f}, 1);
  const SparseMotionField out = BmvcFill(past, future);
  CHECK(out.at(0, 0).provenance == Provenance::kBmvcInferred);
  CHECK(out.at(0, 0).vector == FlowVector{-2.0f, -3.0f});
}

TEST_CASE("bmvc: coded past cell wins") {
  SparseMotionField past(0, 1, 1);
  SparseMotionField future(0, 1, 1);
  past.at(0, 0) = Cell::Coded({1.0f, 0.0f}, 1);
  future.at(0, 0) = Cell::Coded({9.0f, 9.0f}, 1);
  const SparseMotionField out = BmvcFill(past, future);
  CHECK(out.at(0, 0) == past.at(0, 0));
}

TEST_CASE("bmvc: empty in both stays empty") {
  const SparseMotionField out = BmvcFill(SparseMotionField(0, 2, 2), SparseMotionField(0, 2, 2));
  CHECK(out.CountNonEmpty() == 0);
}

TEST_CASE("bmvc: grid mismatch") {
  CHECK_THROWS_AS(BmvcFill(SparseMotionField(0, 2, 2), SparseMotionField(0, 2, 3)),
                  DimensionError);
}

TEST_CASE("bmvc: negation is bitwise, including signed zeros") {
  SparseMotionField past(0, 2, 1);
  SparseMotionField future(0, 2, 1);
  future.at(0, 0) = Cell::Coded({0.0f, -0.0f}, 1);
  future.at(1, 0) = Cell::Coded({0.1f, -1e-30f}, 3);
  const SparseMotionField out = BmvcFill(past, future);
  for (int x = 0; x < 2; ++x) {
    const FlowVector f = *future.at(x, 0).vector;
    const FlowVector p = *out.at(x, 0).vector;
    CHECK(std::bit_cast<std::uint32_t>(p.u) == (std::bit_cast<std::uint32_t>(f.u) ^ 0x80000000u));
    CHECK(std::bit_cast<std::uint32_t>(p.v) == (std::bit_cast<std::uint32_t>(f.v) ^ 0x80000000u));
  }
  CHECK(out.at(1, 0).source_ref_distance == 3);
}

TEST_CASE("bmvc: random fields, idempotent and never loses cells") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> value(-50.0f, 50.0f);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = std::uniform_int_distribution<int>(1, 32)(rng);
    const int h = std::uniform_int_distribution<int>(1, 32)(rng);
    SparseMotionField past(trial, w, h);
    SparseMotionField future(trial, w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (rng() % 2) past.at(x, y) = Cell::Coded({value(rng), value(rng)}, 1);
        if (rng() % 2) future.at(x, y) = Cell::Coded({value(rng), value(rng)}, 2);
      }
    }
    const SparseMotionField once = BmvcFill(past, future);
    CHECK(BmvcFill(once, future) == once);
    CHECK(once.CountNonEmpty() >= past.CountNonEmpty());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (past.at(x, y).vector) {
          REQUIRE(once.at(x, y) == past.at(x, y));
        } else if (future.at(x, y).vector) {
          REQUIRE(once.at(x, y).vector == -*future.at(x, y).vector);
        } else {
          REQUIRE(once.at(x, y).provenance == Provenance::kEmpty);
        }
      }
    }
  }
}

}  // namespace
}  // namespace mvflow
