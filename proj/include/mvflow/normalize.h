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

#ifndef MVFLOW_NORMALIZE_H_
#define MVFLOW_NORMALIZE_H_

#include <optional>
#include <string>
#include <vector>

#include "mvflow/flow_field.h"
#include "mvflow/ingest.h"

namespace mvflow {

inline constexpr int kDefaultHintBits = 7;

// Signed frame distance n - m between the current frame and its reference.
// Positive values mean the reference precedes the current frame.
struct RelativeDistance {
  int value = 0;
  friend bool operator==(const RelativeDistance&, const RelativeDistance&) =
      default;
};

// Signed modular difference of two cyclic order hints,
//   d = ((current - ref + 2^(b-1)) mod 2^b) - 2^(b-1).
// Throws InputError when either hint is outside [0, 2^b), when d == 0 (the
// reference resolves to the current frame), and when the hints are exactly
// half a cycle apart: that distance is ambiguous in direction, and resolving
// it either way would break d(a, b) == -d(b, a).
RelativeDistance RelativeDistanceBetween(int current_hint, int ref_hint,
                                         int hint_bits = kDefaultHintBits);

enum class Direction { kPast, kFuture };

struct NormalizedVector {
  FlowVector vector;  // pixels per single frame interval
  Direction direction = Direction::kPast;
  int distance = 0;  // |n - m|, >= 1

  friend bool operator==(const NormalizedVector&, const NormalizedVector&) =
      default;
};

// Scales an eighth-pel vector referencing a frame |d| intervals away to a
// one-interval displacement: (dx / 8 / |d|, dy / 8 / |d|). Future-pointing
// vectors keep their sign; negation is done during completion.
NormalizedVector NormalizeVector(MotionVectorQ8 mv, RelativeDistance distance);

struct FrameNormalization {
  // One entry per record; nullopt for INTRA, vector-less SKIP, blocks without
  // a resolvable reference.
  std::vector<std::optional<NormalizedVector>> vectors;
  int unresolved = 0;
  std::vector<std::string> warnings;
};

FrameNormalization NormalizeFrame(const FrameDump& frame,
                                  int hint_bits = kDefaultHintBits);

}  // namespace mvflow

#endif  // MVFLOW_NORMALIZE_H_
