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

#ifndef MVFLOW_MOTION_FIELD_H_
#define MVFLOW_MOTION_FIELD_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mvflow/flow_field.h"
#include "mvflow/ingest.h"
#include "mvflow/normalize.h"

namespace mvflow {

enum class Provenance : std::uint8_t { kEmpty, kCoded, kBmvcInferred };

// One 4x4-pixel unit. vector is present iff provenance != kEmpty.
struct Cell {
  std::optional<FlowVector> vector;
  Provenance provenance = Provenance::kEmpty;
  int source_ref_distance = 0;

  static Cell Coded(FlowVector v, int distance) {
    return {v, Provenance::kCoded, distance};
  }

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Unit grid of one frame in a single temporal direction.
class SparseMotionField {
 public:
  SparseMotionField() = default;
  SparseMotionField(int frame_index, int units_w, int units_h);

  int frame_index() const { return frame_index_; }
  int units_w() const { return units_w_; }
  int units_h() const { return units_h_; }

  const Cell& at(int ux, int uy) const { return cells_[index(ux, uy)]; }
  Cell& at(int ux, int uy) { return cells_[index(ux, uy)]; }

  std::span<const Cell> cells() const { return cells_; }
  std::size_t CountNonEmpty() const;

  friend bool operator==(const SparseMotionField&, const SparseMotionField&) =
      default;

 private:
  std::size_t index(int ux, int uy) const {
    return static_cast<std::size_t>(uy) * static_cast<std::size_t>(units_w_) +
           static_cast<std::size_t>(ux);
  }

  int frame_index_ = 0;
  int units_w_ = 0;
  int units_h_ = 0;
  std::vector<Cell> cells_;
};

struct PaintResult {
  SparseMotionField past;
  SparseMotionField future;
  int rejected = 0;          // records overflowing the grid
  int overlapped_cells = 0;  // cells painted more than once
};

// Rasterizes every record carrying a normalized vector into the field of its
// temporal direction. Records are painted in the given (decode) order, so
// later records win on overlap. |normalized| must be parallel to |records|.
PaintResult PaintBlocks(std::span<const BlockMotionRecord> records,
                        const FrameHeader& header,
                        std::span<const std::optional<NormalizedVector>> normalized);

}  // namespace mvflow

#endif  // MVFLOW_MOTION_FIELD_H_
