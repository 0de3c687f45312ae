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

#ifndef MVFLOW_INGEST_H_
#define MVFLOW_INGEST_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvflow {

// AV1 reference slots. kNone marks blocks without a reference (intra).
enum class RefSlot : std::uint8_t {
  kLast,
  kLast2,
  kLast3,
  kGolden,
  kBwdref,
  kAltref2,
  kAltref,
  kNone,
};

inline constexpr int kNumRefSlots = 7;

enum class BlockMode : std::uint8_t { kInter, kIntra, kSkip, kGlobal };

// Canonical spelling ("LAST", "ALTREF2", "NONE", ...).
std::string_view RefSlotName(RefSlot slot);
std::optional<RefSlot> ParseRefSlot(std::string_view name);
std::string_view BlockModeName(BlockMode mode);
std::optional<BlockMode> ParseBlockMode(std::string_view name);

// Motion vector in eighth-pel units, screen coordinates (+x right, +y down).
struct MotionVectorQ8 {
  std::int32_t dx = 0;
  std::int32_t dy = 0;

  friend bool operator==(const MotionVectorQ8&, const MotionVectorQ8&) =
      default;
};

inline constexpr int kUnitSize = 4;        // pixels per grid unit
inline constexpr int kMaxBlockUnits = 32;  // 128 pixels

// One coded block as found in an inspection dump.
struct BlockMotionRecord {
  int frame_index = 0;
  int unit_x = 0;
  int unit_y = 0;
  int width_units = 1;
  int height_units = 1;
  MotionVectorQ8 mv_q8;
  RefSlot ref_slot = RefSlot::kNone;
  BlockMode mode = BlockMode::kIntra;
  // Set when the block was compound-predicted and reduced to one vector.
  bool compound = false;

  friend bool operator==(const BlockMotionRecord&, const BlockMotionRecord&) =
      default;
};

struct FrameHeader {
  int frame_index = 0;
  int order_hint = 0;
  // Indexed by RefSlot (kLast..kAltref); nullopt when the dump omits a slot.
  std::array<std::optional<int>, kNumRefSlots> ref_order_hints{};
  int coded_width = 0;
  int coded_height = 0;
  int display_width = 0;
  int display_height = 0;
  bool show_frame = true;

  int units_w() const { return (coded_width + kUnitSize - 1) / kUnitSize; }
  int units_h() const { return (coded_height + kUnitSize - 1) / kUnitSize; }
  std::optional<int> ref_hint(RefSlot slot) const;

  friend bool operator==(const FrameHeader&, const FrameHeader&) = default;
};

struct FrameDump {
  FrameHeader header;
  // Decode order within the frame; overlap resolution depends on it.
  std::vector<BlockMotionRecord> records;
  // Blocks dropped for an unknown mode or reference name.
  int dropped_blocks = 0;
  std::vector<std::string> warnings;
};

struct ParseOptions {
  int hint_bits = 7;
};

// Line schema:
//   F <frame_index> oh=<hint> refs=<SLOT>:<hint>,... coded=<W>x<H>
//     disp=<W>x<H> show=<0|1>
//   B <unit_x> <unit_y> <w_units> <h_units> mv=<dx>,<dy> ref=<SLOT>
//     mode=<MODE> [compound=1]
// '#' starts a comment. Frames are returned sorted by frame_index (stable).
// Throws ParseError / GeometryError with the offending line number.
std::vector<FrameDump> ParseCanonicalDump(std::string_view text,
                                          const ParseOptions& options = {});

std::string WriteCanonicalDump(const std::vector<FrameDump>& frames);

// Adapter for the AV1 `inspect` tool's per-frame JSON objects. Accepts a JSON
// array of frame objects or a stream of objects separated by whitespace or
// commas. Per frame:
//   frame / displayIndex   frame index (displayIndex wins when present)
//   showFrame              0/1, default 1
//   orderHint              current order hint
//   refOrderHints          array of 7 hints (LAST..ALTREF) or object keyed
//                          by reference name
//   motionVectors          mi rows x cols x [col0,row0,col1,row1] (1/8 pel)
//   referenceFrame         mi rows x cols x [ref0, ref1] (or a scalar)
//   mode                   mi rows x cols
//   blockSize              mi rows x cols (optional; 4x4 blocks otherwise)
//   frameWidth/Height      display size (optional; default = mi grid size)
//   *Map                   name -> value tables; inherited from the previous
//                          frame, else the libaom defaults
// Unknown fields are ignored.
std::vector<FrameDump> ParseInspectDump(std::string_view text,
                                        const ParseOptions& options = {});

}  // namespace mvflow

#endif  // MVFLOW_INGEST_H_
