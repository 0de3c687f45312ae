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

#include <random>
#include <vector>

#include "doctest.h"
#include "mvflow/errors.h"

namespace mvflow {
namespace {

FrameHeader Header(int units_w, int units_h) {
  FrameHeader h;
  h.frame_index = 1;
  h.order_hint = 1;
  h.coded_width = units_w * 4;
  h.coded_height = units_h * 4;
  h.display_width = h.coded_width;
  h.display_height = h.coded_height;
  return h;
}

BlockMotionRecord Block(int ux, int uy, int w, int h) {
  BlockMotionRecord r;
  r.frame_index = 1;
  r.unit_x = ux;
  r.unit_y = uy;
  r.width_units = w;
  r.height_units = h;
  r.ref_slot = RefSlot::kLast;
  r.mode = BlockMode::kInter;
  return r;
}

NormalizedVector Past(float u, float v, int distance = 1) {
  return {{u, v}, Direction::kPast, distance};
}

TEST_CASE("paint: one 8x8 block") {
  const std::vector<BlockMotionRecord> records = {Block(0, 0, 2, 2)};
  const std::vector<std::optional<NormalizedVector>> norm = {Past(1.0f, -0.5f)};
  const PaintResult r = PaintBlocks(records, Header(4, 4), norm);
  for (int uy = 0; uy < 4; ++uy) {
    for (int ux = 0; ux < 4; ++ux) {
      const Cell& c = r.past.at(ux, uy);
      if (ux < 2 && uy < 2) {
        CHECK(c.provenance == Provenance::kCoded);
        CHECK(c.vector == FlowVector{1.0f, -0.5f});
        CHECK(c.source_ref_distance == 1);
      } else {
        CHECK(c.provenance == Provenance::kEmpty);
        CHECK_FALSE(c.vector.has_value());
      }
    }
  }
  CHECK(r.future.CountNonEmpty() == 0);
}

TEST_CASE("paint: zero records leave every cell empty") {
  const PaintResult r = PaintBlocks({}, Header(3, 2), {});
  CHECK(r.past.units_w() == 3);
  CHECK(r.past.units_h() == 2);
  CHECK(r.past.CountNonEmpty() == 0);
  CHECK(r.future.CountNonEmpty() == 0);
}

TEST_CASE("paint: future vectors go to the future field") {
  const std::vector<BlockMotionRecord> records = {Block(1, 1, 1, 1)};
  const std::vector<std::optional<NormalizedVector>> norm = {
      NormalizedVector{{2.0f, 3.0f}, Direction::kFuture, 2}};
  const PaintResult r = PaintBlocks(records, Header(2, 2), norm);
  CHECK(r.past.CountNonEmpty() == 0);
  CHECK(r.future.at(1, 1).vector == FlowVector{2.0f, 3.0f});
  CHECK(r.future.at(1, 1).source_ref_distance == 2);
}

TEST_CASE("paint: records without a vector are not painted") {
  const std::vector<BlockMotionRecord> records = {Block(0, 0, 2, 2)};
  const std::vector<std::optional<NormalizedVector>> norm = {std::nullopt};
  const PaintResult r = PaintBlocks(records, Header(2, 2), norm);
  CHECK(r.past.CountNonEmpty() == 0);
}

TEST_CASE("paint: overflowing records are rejected and counted") {
  const std::vector<BlockMotionRecord> records = {Block(3, 0, 2, 1), Block(0, 0, 1, 1)};
  const std::vector<std::optional<NormalizedVector>> norm = {Past(1, 1), Past(2, 2)};
  const PaintResult r = PaintBlocks(records, Header(4, 4), norm);
  CHECK(r.rejected == 1);
  CHECK(r.past.CountNonEmpty() == 1);
}

TEST_CASE("paint: size mismatch between records and vectors") {
  const std::vector<BlockMotionRecord> records = {Block(0, 0, 1, 1)};
  CHECK_THROWS_AS(PaintBlocks(records, Header(2, 2), {}), ProcessingError);
}

// Scalar reference rasterizer: returns the painted vector per cell (or none)
// and the number of cells written more than once.
struct Raster {
  std::vector<std::optional<FlowVector>> cells;
  int overlapped = 0;
};

Raster ReferencePaint(int uw, int uh, const std::vector<BlockMotionRecord>& records,
                      const std::vector<std::optional<NormalizedVector>>& norm) {
  Raster out;
  out.cells.assign(static_cast<std::size_t>(uw * uh), std::nullopt);
  std::vector<int> writes(out.cells.size(), 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!norm[i] || norm[i]->direction != Direction::kPast) continue;
    if (r.unit_x + r.width_units > uw || r.unit_y + r.height_units > uh) continue;
    for (int y = r.unit_y; y < r.unit_y + r.height_units; ++y) {
      for (int x = r.unit_x; x < r.unit_x + r.width_units; ++x) {
        out.cells[static_cast<std::size_t>(y * uw + x)] = norm[i]->vector;
        ++writes[static_cast<std::size_t>(y * uw + x)];
      }
    }
  }
  for (const int w : writes) out.overlapped += w > 1 ? 1 : 0;
  return out;
}

TEST_CASE("paint: overlapping records, last one wins") {
  const std::vector<BlockMotionRecord> records = {Block(0, 0, 3, 3), Block(1, 1, 3, 3)};
  const std::vector<std::optional<NormalizedVector>> norm = {Past(1, 0), Past(0, 1)};
  const PaintResult r = PaintBlocks(records, Header(4, 4), norm);
  const Raster ref = ReferencePaint(4, 4, records, norm);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      CHECK(r.past.at(x, y).vector == ref.cells[static_cast<std::size_t>(y * 4 + x)]);
    }
  }
  CHECK(r.past.at(1, 1).vector == FlowVector{0, 1});
  CHECK(r.overlapped_cells == 4);
}

TEST_CASE("paint: coded area equals the reference rasterizer on random grids") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int uw = std::uniform_int_distribution<int>(1, 32)(rng);
    const int uh = std::uniform_int_distribution<int>(1, 32)(rng);
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    std::vector<BlockMotionRecord> records;
    std::vector<std::optional<NormalizedVector>> norm;
    int expected_rejected = 0;
    for (int i = 0; i < n; ++i) {
      auto b = Block(std::uniform_int_distribution<int>(0, uw - 1)(rng),
                     std::uniform_int_distribution<int>(0, uh - 1)(rng),
                     std::uniform_int_distribution<int>(1, 8)(rng),
                     std::uniform_int_distribution<int>(1, 8)(rng));
      const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
      const float u = static_cast<float>(i);
      if (kind == 0) {
        norm.push_back(std::nullopt);
      } else {
        norm.push_back(NormalizedVector{
            {u, -u}, kind == 1 ? Direction::kFuture : Direction::kPast, 1});
      }
      if (b.unit_x + b.width_units > uw || b.unit_y + b.height_units > uh) {
        ++expected_rejected;
      }
      records.push_back(b);
    }
    const PaintResult r = PaintBlocks(records, Header(uw, uh), norm);
    const Raster ref = ReferencePaint(uw, uh, records, norm);
    std::size_t ref_count = 0;
    for (int y = 0; y < uh; ++y) {
      for (int x = 0; x < uw; ++x) {
        const auto& expected = ref.cells[static_cast<std::size_t>(y * uw + x)];
        REQUIRE(r.past.at(x, y).vector == expected);
        ref_count += expected ? 1 : 0;
      }
    }
    CHECK(r.past.CountNonEmpty() == ref_count);
    CHECK(r.rejected == expected_rejected);
    const PaintResult again = PaintBlocks(records, Header(uw, uh), norm);
    CHECK(again.past == r.past);
    CHECK(again.future == r.future);
  }
}

}  // namespace
}  // namespace mvflow
