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

#include "mvflow/motion_field.h"

#include <algorithm>

#include "mvflow/errors.h"

namespace mvflow {

SparseMotionField::SparseMotionField(int frame_index, int units_w, int units_h)
    : frame_index_(frame_index), units_w_(units_w), units_h_(units_h) {
  if (units_w < 0 || units_h < 0) {
    throw DimensionError("unit grid dimensions must be non-negative");
  }
  cells_.resize(static_cast<std::size_t>(units_w) *
                static_cast<std::size_t>(units_h));
}

std::size_t SparseMotionField::CountNonEmpty() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) {
        return c.provenance != Provenance::kEmpty;
      }));
}

PaintResult PaintBlocks(
    std::span<const BlockMotionRecord> records, const FrameHeader& header,
    std::span<const std::optional<NormalizedVector>> normalized) {
  if (records.size() != normalized.size()) {
    throw ProcessingError("normalized vectors must be parallel to records");
  }
  const int w = header.units_w();
  const int h = header.units_h();
  PaintResult result{SparseMotionField(header.frame_index, w, h),
                     SparseMotionField(header.frame_index, w, h), 0, 0};
  // Paint counts per direction, for overlap detection.
  std::vector<std::uint8_t> painted_past(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::uint8_t> painted_future(painted_past.size(), 0);

  for (std::size_t i = 0; i < records.size(); ++i) {
    const BlockMotionRecord& r = records[i];
    if (r.width_units < 1 || r.height_units < 1 || r.unit_x < 0 ||
        r.unit_y < 0 || r.unit_x + r.width_units > w ||
        r.unit_y + r.height_units > h) {
      ++result.rejected;
      continue;
    }
    if (!normalized[i]) continue;
    const NormalizedVector& nv = *normalized[i];
    const bool past = nv.direction == Direction::kPast;
    SparseMotionField& field = past ? result.past : result.future;
    auto& painted = past ? painted_past : painted_future;
    const Cell cell = Cell::Coded(nv.vector, nv.distance);
    for (int uy = r.unit_y; uy < r.unit_y + r.height_units; ++uy) {
      for (int ux = r.unit_x; ux < r.unit_x + r.width_units; ++ux) {
        auto& count = painted[static_cast<std::size_t>(uy) * w + ux];
        if (count == 1) ++result.overlapped_cells;
        if (count < 2) ++count;
        field.at(ux, uy) = cell;
      }
    }
  }
  return result;
}

}  // namespace mvflow
