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

#include "mvflow/normalize.h"

#include <cstdlib>
#include <string>

#include "mvflow/errors.h"

namespace mvflow {

RelativeDistance RelativeDistanceBetween(int current_hint, int ref_hint,
                                         int hint_bits) {
  if (hint_bits < 1 || hint_bits > 16) {
    throw InputError("hint_bits must be in [1, 16]");
  }
  const int cycle = 1 << hint_bits;
  const int half = cycle >> 1;
  if (current_hint < 0 || current_hint >= cycle || ref_hint < 0 ||
      ref_hint >= cycle) {
    throw InputError("order hint outside [0, " + std::to_string(cycle) + ")");
  }
  int d = (current_hint - ref_hint + half) % cycle;
  if (d < 0) d += cycle;
  d -= half;
  if (d == 0) {
    throw InputError("reference order_hint " + std::to_string(ref_hint) +
                     " resolves to the current frame");
  }
  if (d == -half) {
    throw InputError("order hints " + std::to_string(current_hint) + " and " +
                     std::to_string(ref_hint) +
                     " are half a cycle apart; direction is ambiguous");
  }
  return {d};
}

NormalizedVector NormalizeVector(MotionVectorQ8 mv, RelativeDistance distance) {
  if (distance.value == 0) {
    throw InputError("cannot normalize a vector with zero reference distance");
  }
  const int magnitude = std::abs(distance.value);
  // The /8 step is exact in binary floating point; the distance division is
  // a single correctly rounded operation.
  const float scale = static_cast<float>(magnitude);
  NormalizedVector out;
  out.vector.u = static_cast<float>(mv.dx) / 8.0f / scale;
  out.vector.v = static_cast<float>(mv.dy) / 8.0f / scale;
  out.direction = distance.value > 0 ? Direction::kPast : Direction::kFuture;
  out.distance = magnitude;
  return out;
}

FrameNormalization NormalizeFrame(const FrameDump& frame, int hint_bits) {
  FrameNormalization out;
  out.vectors.reserve(frame.records.size());
  const FrameHeader& h = frame.header;
  for (const auto& r : frame.records) {
    const bool carries_vector =
        r.mode == BlockMode::kInter || r.mode == BlockMode::kGlobal ||
        (r.mode == BlockMode::kSkip && r.mv_q8 != MotionVectorQ8{});
    if (!carries_vector) {
      out.vectors.emplace_back();
      continue;
    }
    const auto ref_hint = h.ref_hint(r.ref_slot);
    if (!ref_hint) {
      ++out.unresolved;
      out.warnings.push_back("frame " + std::to_string(h.frame_index) +
                             ": block at unit (" + std::to_string(r.unit_x) +
                             "," + std::to_string(r.unit_y) +
                             ") has no resolvable reference");
      out.vectors.emplace_back();
      continue;
    }
    try {
      const auto d = RelativeDistanceBetween(h.order_hint, *ref_hint, hint_bits);
      out.vectors.emplace_back(NormalizeVector(r.mv_q8, d));
    } catch (const InputError& e) {
      ++out.unresolved;
      out.warnings.push_back("frame " + std::to_string(h.frame_index) +
                             ": block at unit (" + std::to_string(r.unit_x) +
                             "," + std::to_string(r.unit_y) + "): " + e.what());
      out.vectors.emplace_back();
    }
  }
  return out;
}

}  // namespace mvflow
