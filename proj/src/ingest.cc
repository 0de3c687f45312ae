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

#include "mvflow/ingest.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"
#include "mvflow/errors.h"
#include "mvflow/normalize.h"

namespace mvflow {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 8> kRefSlotNames = {
    "LAST", "LAST2", "LAST3", "GOLDEN", "BWDREF", "ALTREF2", "ALTREF", "NONE"};
constexpr std::array<std::string_view, 4> kModeNames = {"INTER", "INTRA",
                                                        "SKIP", "GLOBAL"};

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

int ParseInt(std::string_view s, int line, std::string_view what) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ParseError(line, "invalid integer for " + std::string(what) + ": '" +
                               std::string(s) + "'");
  }
  return value;
}

std::pair<int, int> ParsePair(std::string_view s, char sep, int line,
                              std::string_view what) {
  const auto pos = s.find(sep);
  if (pos == std::string_view::npos) {
    throw ParseError(line, "expected " + std::string(what) + " as a" +
                               std::string(1, sep) + "b, got '" +
                               std::string(s) + "'");
  }
  return {ParseInt(s.substr(0, pos), line, what),
          ParseInt(s.substr(pos + 1), line, what)};
}

// Splits "key=value"; throws unless the key matches.
std::string_view ExpectKey(std::string_view token, std::string_view key,
                           int line) {
  if (token.size() <= key.size() || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    throw ParseError(line, "expected '" + std::string(key) + "=...', got '" +
                               std::string(token) + "'");
  }
  return token.substr(key.size() + 1);
}

void ValidateHeader(const FrameHeader& h, int hint_bits, int line) {
  const int hint_limit = 1 << hint_bits;
  if (h.order_hint < 0 || h.order_hint >= hint_limit) {
    throw ParseError(line, "order_hint " + std::to_string(h.order_hint) +
                               " outside [0, " + std::to_string(hint_limit) +
                               ")");
  }
  for (const auto& hint : h.ref_order_hints) {
    if (hint && (*hint < 0 || *hint >= hint_limit)) {
      throw ParseError(line, "reference order_hint " + std::to_string(*hint) +
                                 " outside [0, " + std::to_string(hint_limit) +
                                 ")");
    }
  }
  if (h.coded_width <= 0 || h.coded_height <= 0) {
    throw GeometryError(line, "coded dimensions must be positive");
  }
  if (h.display_width <= 0 || h.display_height <= 0 ||
      h.display_width > h.coded_width || h.display_height > h.coded_height) {
    throw GeometryError(line, "display dimensions must be positive and within "
                              "the coded dimensions");
  }
}

// Throws for any violated record invariant. |line| is 0 for non-line inputs.
void ValidateRecord(const BlockMotionRecord& r, const FrameHeader& h,
                    int line) {
  const std::string where =
      line > 0 ? std::string() : "frame " + std::to_string(h.frame_index) + ": ";
  if (r.width_units < 1 || r.width_units > kMaxBlockUnits ||
      r.height_units < 1 || r.height_units > kMaxBlockUnits) {
    throw GeometryError(line, where + "block extent " +
                                  std::to_string(r.width_units) + "x" +
                                  std::to_string(r.height_units) +
                                  " units outside [1, 32]");
  }
  if (r.unit_x < 0 || r.unit_y < 0 ||
      r.unit_x + r.width_units > h.units_w() ||
      r.unit_y + r.height_units > h.units_h()) {
    throw GeometryError(line, where + "block at unit (" +
                                  std::to_string(r.unit_x) + "," +
                                  std::to_string(r.unit_y) +
                                  ") overflows the " +
                                  std::to_string(h.units_w()) + "x" +
                                  std::to_string(h.units_h()) + " unit grid");
  }
  if (r.mode == BlockMode::kIntra &&
      (r.ref_slot != RefSlot::kNone || r.mv_q8 != MotionVectorQ8{})) {
    throw ParseError(line, where + "INTRA block must have ref=NONE and mv=0,0");
  }
  if (r.ref_slot != RefSlot::kNone && !h.ref_hint(r.ref_slot)) {
    throw ParseError(line, where + "missing order_hint for referenced slot " +
                               std::string(RefSlotName(r.ref_slot)));
  }
}

void SortByFrameIndex(std::vector<FrameDump>& frames) {
  std::stable_sort(frames.begin(), frames.end(),
                   [](const FrameDump& a, const FrameDump& b) {
                     return a.header.frame_index < b.header.frame_index;
                   });
}

FrameHeader ParseFrameLine(const std::vector<std::string_view>& tok, int line) {
  if (tok.size() != 7) {
    throw ParseError(line, "frame line needs 6 fields after 'F'");
  }
  FrameHeader h;
  h.frame_index = ParseInt(tok[1], line, "frame_index");
  h.order_hint = ParseInt(ExpectKey(tok[2], "oh", line), line, "oh");
  const std::string_view refs = ExpectKey(tok[3], "refs", line);
  if (!refs.empty() && refs != "-") {
    std::size_t start = 0;
    while (start <= refs.size()) {
      auto end = refs.find(',', start);
      if (end == std::string_view::npos) end = refs.size();
      const std::string_view entry = refs.substr(start, end - start);
      const auto colon = entry.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line, "reference entry '" + std::string(entry) +
                                   "' is not SLOT:hint");
      }
      const auto slot = ParseRefSlot(entry.substr(0, colon));
      if (!slot || *slot == RefSlot::kNone) {
        throw ParseError(line, "unknown reference slot '" +
                                   std::string(entry.substr(0, colon)) + "'");
      }
      auto& hint = h.ref_order_hints[static_cast<int>(*slot)];
      if (hint) {
        throw ParseError(line, "duplicate reference slot '" +
                                   std::string(entry.substr(0, colon)) + "'");
      }
      hint = ParseInt(entry.substr(colon + 1), line, "reference order_hint");
      start = end + 1;
    }
  }
  std::tie(h.coded_width, h.coded_height) =
      ParsePair(ExpectKey(tok[4], "coded", line), 'x', line, "coded");
  std::tie(h.display_width, h.display_height) =
      ParsePair(ExpectKey(tok[5], "disp", line), 'x', line, "disp");
  const std::string_view show = ExpectKey(tok[6], "show", line);
  if (show != "0" && show != "1") {
    throw ParseError(line, "show must be 0 or 1");
  }
  h.show_frame = show == "1";
  return h;
}

// Returns nullopt when the mode is unknown (block dropped by the caller).
std::optional<BlockMotionRecord> ParseBlockLine(
    const std::vector<std::string_view>& tok, const FrameHeader& h, int line) {
  if (tok.size() != 8 && tok.size() != 9) {
    throw ParseError(line, "block line needs 7 or 8 fields after 'B'");
  }
  BlockMotionRecord r;
  r.frame_index = h.frame_index;
  r.unit_x = ParseInt(tok[1], line, "unit_x");
  r.unit_y = ParseInt(tok[2], line, "unit_y");
  r.width_units = ParseInt(tok[3], line, "width_units");
  r.height_units = ParseInt(tok[4], line, "height_units");
  std::tie(r.mv_q8.dx, r.mv_q8.dy) =
      ParsePair(ExpectKey(tok[5], "mv", line), ',', line, "mv");
  const std::string_view ref_name = ExpectKey(tok[6], "ref", line);
  const auto slot = ParseRefSlot(ref_name);
  if (!slot) {
    throw ParseError(line, "unknown reference slot '" + std::string(ref_name) +
                               "'");
  }
  r.ref_slot = *slot;
  if (tok.size() == 9) {
    const std::string_view flag = ExpectKey(tok[8], "compound", line);
    if (flag != "0" && flag != "1") {
      throw ParseError(line, "compound must be 0 or 1");
    }
    r.compound = flag == "1";
  }
  const auto mode = ParseBlockMode(ExpectKey(tok[7], "mode", line));
  if (!mode) return std::nullopt;
  r.mode = *mode;
  ValidateRecord(r, h, line);
  return r;
}

// ---------------------------------------------------------------------------
// inspect adapter

struct InspectMaps {
  std::map<int, std::string> mode;
  std::map<int, std::string> reference;
  std::map<int, std::string> block_size;
};

InspectMaps DefaultInspectMaps() {
  InspectMaps maps;
  const char* const modes[] = {
      "DC_PRED",         "V_PRED",          "H_PRED",
      "D45_PRED",        "D135_PRED",       "D113_PRED",
      "D157_PRED",       "D203_PRED",       "D67_PRED",
      "SMOOTH_PRED",     "SMOOTH_V_PRED",   "SMOOTH_H_PRED",
      "PAETH_PRED",      "NEARESTMV",       "NEARMV",
      "GLOBALMV",        "NEWMV",           "NEAREST_NEARESTMV",
      "NEAR_NEARMV",     "NEAREST_NEWMV",   "NEW_NEARESTMV",
      "NEAR_NEWMV",      "NEW_NEARMV",      "GLOBAL_GLOBALMV",
      "NEW_NEWMV"};
  for (int i = 0; i < static_cast<int>(std::size(modes)); ++i) {
    maps.mode[i] = modes[i];
  }
  const char* const refs[] = {"INTRA_FRAME",   "LAST_FRAME",   "LAST2_FRAME",
                              "LAST3_FRAME",   "GOLDEN_FRAME", "BWDREF_FRAME",
                              "ALTREF2_FRAME", "ALTREF_FRAME"};
  maps.reference[-1] = "NONE";
  for (int i = 0; i < static_cast<int>(std::size(refs)); ++i) {
    maps.reference[i] = refs[i];
  }
  const char* const sizes[] = {
      "BLOCK_4X4",    "BLOCK_4X8",   "BLOCK_8X4",   "BLOCK_8X8",
      "BLOCK_8X16",   "BLOCK_16X8",  "BLOCK_16X16", "BLOCK_16X32",
      "BLOCK_32X16",  "BLOCK_32X32", "BLOCK_32X64", "BLOCK_64X32",
      "BLOCK_64X64",  "BLOCK_64X128", "BLOCK_128X64", "BLOCK_128X128",
      "BLOCK_4X16",   "BLOCK_16X4",  "BLOCK_8X32",  "BLOCK_32X8",
      "BLOCK_16X64",  "BLOCK_64X16"};
  for (int i = 0; i < static_cast<int>(std::size(sizes)); ++i) {
    maps.block_size[i] = sizes[i];
  }
  return maps;
}

void LoadMap(const json& frame, const char* key, std::map<int, std::string>& out) {
  const auto it = frame.find(key);
  if (it == frame.end()) return;
  if (!it->is_object()) throw FormatError(std::string(key) + " must be an object");
  out.clear();
  for (const auto& [name, value] : it->items()) {
    if (!value.is_number_integer()) {
      throw FormatError(std::string(key) + " values must be integers");
    }
    out[value.get<int>()] = name;
  }
}

// "LAST_FRAME", "LAST", "INTRA_FRAME" -> slot. INTRA maps to kNone.
std::optional<RefSlot> InspectRefSlot(std::string_view name) {
  if (name == "INTRA_FRAME" || name == "NONE" || name == "NONE_FRAME") {
    return RefSlot::kNone;
  }
  constexpr std::string_view kSuffix = "_FRAME";
  if (name.size() > kSuffix.size() &&
      name.substr(name.size() - kSuffix.size()) == kSuffix) {
    name.remove_suffix(kSuffix.size());
  }
  return ParseRefSlot(name);
}

std::optional<BlockMode> InspectMode(std::string_view name) {
  if (auto own = ParseBlockMode(name)) return own;
  if (name.ends_with("_PRED")) return BlockMode::kIntra;
  if (name == "GLOBALMV" || name == "GLOBAL_GLOBALMV") return BlockMode::kGlobal;
  if (name.ends_with("MV")) return BlockMode::kInter;
  return std::nullopt;
}

// "BLOCK_16X32" -> {4, 8} units.
std::optional<std::pair<int, int>> BlockSizeUnits(std::string_view name) {
  if (!name.starts_with("BLOCK_")) return std::nullopt;
  name.remove_prefix(6);
  const auto x = name.find('X');
  if (x == std::string_view::npos) return std::nullopt;
  int w = 0;
  int h = 0;
  auto r1 = std::from_chars(name.data(), name.data() + x, w);
  auto r2 = std::from_chars(name.data() + x + 1, name.data() + name.size(), h);
  if (r1.ec != std::errc() || r2.ec != std::errc() || w < kUnitSize ||
      h < kUnitSize) {
    return std::nullopt;
  }
  return std::make_pair(w / kUnitSize, h / kUnitSize);
}

int IntField(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw FormatError(std::string("frame object needs integer '") + key + "'");
  }
  return it->get<int>();
}

// Splits the stream into top-level JSON objects, skipping '[', ']', ',' and
// whitespace between them.
std::vector<std::string_view> SplitObjects(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '[' || c == ']' || c == ',' || c == ' ' || c == '\n' ||
        c == '\r' || c == '\t') {
      ++i;
      continue;
    }
    if (c != '{') {
      throw FormatError("unexpected character '" + std::string(1, c) +
                        "' between frame objects at offset " +
                        std::to_string(i));
    }
    int depth = 0;
    bool in_string = false;
    std::size_t j = i;
    for (; j < text.size(); ++j) {
      const char d = text[j];
      if (in_string) {
        if (d == '\\') {
          ++j;
        } else if (d == '"') {
          in_string = false;
        }
        continue;
      }
      if (d == '"') {
        in_string = true;
      } else if (d == '{') {
        ++depth;
      } else if (d == '}' && --depth == 0) {
        break;
      }
    }
    if (j >= text.size()) throw FormatError("unterminated frame object");
    out.push_back(text.substr(i, j - i + 1));
    i = j + 1;
  }
  return out;
}

const json& GridCell(const json& grid, int row, int col) {
  return grid.at(static_cast<std::size_t>(row)).at(static_cast<std::size_t>(col));
}

FrameDump ParseInspectFrame(const json& frame, InspectMaps& maps,
                            const ParseOptions& options) {
  if (!frame.is_object()) throw FormatError("frame entry is not an object");
  LoadMap(frame, "modeMap", maps.mode);
  LoadMap(frame, "referenceFrameMap", maps.reference);
  LoadMap(frame, "blockSizeMap", maps.block_size);

  FrameDump dump;
  FrameHeader& h = dump.header;
  h.frame_index = frame.contains("displayIndex") ? IntField(frame, "displayIndex")
                                                 : IntField(frame, "frame");
  h.order_hint = IntField(frame, "orderHint");
  if (frame.contains("showFrame")) h.show_frame = IntField(frame, "showFrame") != 0;

  if (const auto it = frame.find("refOrderHints"); it != frame.end()) {
    if (it->is_array()) {
      if (it->size() != kNumRefSlots) {
        throw FormatError("refOrderHints array must have 7 entries");
      }
      for (int s = 0; s < kNumRefSlots; ++s) {
        const auto& v = (*it)[static_cast<std::size_t>(s)];
        if (v.is_number_integer() && v.get<int>() >= 0) {
          h.ref_order_hints[s] = v.get<int>();
        }
      }
    } else if (it->is_object()) {
      for (const auto& [name, value] : it->items()) {
        const auto slot = InspectRefSlot(name);
        if (!slot || *slot == RefSlot::kNone || !value.is_number_integer()) {
          throw FormatError("bad refOrderHints entry '" + name + "'");
        }
        h.ref_order_hints[static_cast<int>(*slot)] = value.get<int>();
      }
    } else {
      throw FormatError("refOrderHints must be an array or object");
    }
  }

  for (const char* key : {"motionVectors", "referenceFrame", "mode"}) {
    const auto it = frame.find(key);
    if (it == frame.end() || !it->is_array()) {
      throw FormatError("frame " + std::to_string(h.frame_index) +
                        " is missing motion array '" + key + "'");
    }
  }
  const json& mvs = frame["motionVectors"];
  const json& refs = frame["referenceFrame"];
  const json& modes = frame["mode"];
  const json* sizes = frame.contains("blockSize") ? &frame["blockSize"] : nullptr;

  const int rows = static_cast<int>(mvs.size());
  const int cols = rows > 0 ? static_cast<int>(mvs[0].size()) : 0;
  auto check_grid = [&](const json& grid, const char* key) {
    if (!grid.is_array() || static_cast<int>(grid.size()) != rows) {
      throw FormatError(std::string(key) + " grid has inconsistent row count");
    }
    for (const auto& row : grid) {
      if (!row.is_array() || static_cast<int>(row.size()) != cols) {
        throw FormatError(std::string(key) + " grid has ragged rows");
      }
    }
  };
  check_grid(mvs, "motionVectors");
  check_grid(refs, "referenceFrame");
  check_grid(modes, "mode");
  if (sizes) check_grid(*sizes, "blockSize");

  h.coded_width = std::max(cols, 1) * kUnitSize;
  h.coded_height = std::max(rows, 1) * kUnitSize;
  h.display_width = frame.contains("frameWidth") ? IntField(frame, "frameWidth")
                                                 : h.coded_width;
  h.display_height = frame.contains("frameHeight")
                         ? IntField(frame, "frameHeight")
                         : h.coded_height;
  ValidateHeader(h, options.hint_bits, 0);

  auto lookup = [](const std::map<int, std::string>& m, const json& v)
      -> std::optional<std::string> {
    if (v.is_string()) return v.get<std::string>();
    if (!v.is_number_integer()) return std::nullopt;
    const auto it = m.find(v.get<int>());
    if (it == m.end()) return std::nullopt;
    return it->second;
  };
  auto warn = [&](const std::string& msg) {
    ++dump.dropped_blocks;
    dump.warnings.push_back(msg);
  };

  std::vector<char> consumed(static_cast<std::size_t>(rows) * cols, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (consumed[static_cast<std::size_t>(r) * cols + c]) continue;
      int bw = 1;
      int bh = 1;
      if (sizes) {
        const auto name = lookup(maps.block_size, GridCell(*sizes, r, c));
        const auto units = name ? BlockSizeUnits(*name) : std::nullopt;
        if (!units) {
          throw FormatError("frame " + std::to_string(h.frame_index) +
                            ": unknown block size at mi (" + std::to_string(r) +
                            "," + std::to_string(c) + ")");
        }
        bw = std::min(units->first, cols - c);
        bh = std::min(units->second, rows - r);
      }
      for (int y = r; y < r + bh; ++y) {
        for (int x = c; x < c + bw; ++x) {
          consumed[static_cast<std::size_t>(y) * cols + x] = 1;
        }
      }

      const std::string where = "frame " + std::to_string(h.frame_index) +
                                " mi (" + std::to_string(r) + "," +
                                std::to_string(c) + ")";
      const auto mode_name = lookup(maps.mode, GridCell(modes, r, c));
      const auto mode = mode_name ? InspectMode(*mode_name) : std::nullopt;
      if (!mode) {
        warn(where + ": unknown mode, block dropped");
        continue;
      }

      const json& ref_cell = GridCell(refs, r, c);
      std::vector<json> ref_values;
      if (ref_cell.is_array()) {
        ref_values.assign(ref_cell.begin(), ref_cell.end());
      } else {
        ref_values.push_back(ref_cell);
      }
      std::vector<RefSlot> slots;
      bool unknown_ref = false;
      for (const auto& v : ref_values) {
        const auto name = lookup(maps.reference, v);
        const auto slot = name ? InspectRefSlot(*name) : std::nullopt;
        if (!slot) {
          unknown_ref = true;
          break;
        }
        slots.push_back(*slot);
      }
      if (unknown_ref || slots.empty()) {
        warn(where + ": unknown reference name, block dropped");
        continue;
      }

      const json& mv_cell = GridCell(mvs, r, c);
      if (!mv_cell.is_array() || mv_cell.size() < 2) {
        throw FormatError(where + ": motion vector entry must be [col,row,...]");
      }
      auto mv_at = [&](std::size_t k) {
        if (mv_cell.size() < 2 * k + 2) return MotionVectorQ8{};
        return MotionVectorQ8{mv_cell[2 * k].get<int>(),
                              mv_cell[2 * k + 1].get<int>()};
      };

      BlockMotionRecord rec;
      rec.frame_index = h.frame_index;
      rec.unit_x = c;
      rec.unit_y = r;
      rec.width_units = bw;
      rec.height_units = bh;
      rec.mode = *mode;
      if (rec.mode == BlockMode::kIntra || slots[0] == RefSlot::kNone) {
        rec.mode = BlockMode::kIntra;
        rec.ref_slot = RefSlot::kNone;
        rec.mv_q8 = {};
      } else {
        std::size_t pick = 0;
        const bool compound = slots.size() > 1 && slots[1] != RefSlot::kNone;
        if (compound) {
          // First listed reference lying in the past wins.
          for (std::size_t k = 0; k < 2; ++k) {
            const auto hint = h.ref_hint(slots[k]);
            if (!hint) continue;
            try {
              if (RelativeDistanceBetween(h.order_hint, *hint, options.hint_bits)
                      .value > 0) {
                pick = k;
                break;
              }
            } catch (const InputError&) {
            }
          }
        }
        rec.compound = compound;
        rec.ref_slot = slots[pick];
        rec.mv_q8 = mv_at(pick);
      }
      ValidateRecord(rec, h, 0);
      dump.records.push_back(rec);
    }
  }
  return dump;
}

}  // namespace

std::string_view RefSlotName(RefSlot slot) {
  return kRefSlotNames[static_cast<std::size_t>(slot)];
}

std::optional<RefSlot> ParseRefSlot(std::string_view name) {
  for (std::size_t i = 0; i < kRefSlotNames.size(); ++i) {
    if (kRefSlotNames[i] == name) return static_cast<RefSlot>(i);
  }
  return std::nullopt;
}

std::string_view BlockModeName(BlockMode mode) {
  return kModeNames[static_cast<std::size_t>(mode)];
}

std::optional<BlockMode> ParseBlockMode(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<BlockMode>(i);
  }
  return std::nullopt;
}

std::optional<int> FrameHeader::ref_hint(RefSlot slot) const {
  if (slot == RefSlot::kNone) return std::nullopt;
  return ref_order_hints[static_cast<std::size_t>(slot)];
}

std::vector<FrameDump> ParseCanonicalDump(std::string_view text,
                                          const ParseOptions& options) {
  if (options.hint_bits < 1 || options.hint_bits > 16) {
    throw InputError("hint_bits must be in [1, 16]");
  }
  std::vector<FrameDump> frames;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    const auto tok = SplitWhitespace(line);
    if (tok[0] == "F") {
      FrameDump dump;
      dump.header = ParseFrameLine(tok, line_no);
      ValidateHeader(dump.header, options.hint_bits, line_no);
      frames.push_back(std::move(dump));
    } else if (tok[0] == "B") {
      if (frames.empty()) {
        throw ParseError(line_no, "block line before any frame line");
      }
      FrameDump& current = frames.back();
      auto record = ParseBlockLine(tok, current.header, line_no);
      if (record) {
        current.records.push_back(*record);
      } else {
        ++current.dropped_blocks;
        current.warnings.push_back("line " + std::to_string(line_no) +
                                   ": unknown mode, block dropped");
      }
    } else {
      throw ParseError(line_no, "unknown record type '" + std::string(tok[0]) +
                                    "'");
    }
  }
  SortByFrameIndex(frames);
  return frames;
}

std::string WriteCanonicalDump(const std::vector<FrameDump>& frames) {
  std::ostringstream out;
  for (const auto& frame : frames) {
    const FrameHeader& h = frame.header;
    out << "F " << h.frame_index << " oh=" << h.order_hint << " refs=";
    bool first = true;
    for (int s = 0; s < kNumRefSlots; ++s) {
      if (!h.ref_order_hints[s]) continue;
      if (!first) out << ',';
      out << RefSlotName(static_cast<RefSlot>(s)) << ':' << *h.ref_order_hints[s];
      first = false;
    }
    out << " coded=" << h.coded_width << 'x' << h.coded_height
        << " disp=" << h.display_width << 'x' << h.display_height
        << " show=" << (h.show_frame ? 1 : 0) << '\n';
    for (const auto& r : frame.records) {
      out << "B " << r.unit_x << ' ' << r.unit_y << ' ' << r.width_units << ' '
          << r.height_units << " mv=" << r.mv_q8.dx << ',' << r.mv_q8.dy
          << " ref=" << RefSlotName(r.ref_slot)
          << " mode=" << BlockModeName(r.mode);
      if (r.compound) out << " compound=1";
      out << '\n';
    }
  }
  return out.str();
}

std::vector<FrameDump> ParseInspectDump(std::string_view text,
                                        const ParseOptions& options) {
  if (options.hint_bits < 1 || options.hint_bits > 16) {
    throw InputError("hint_bits must be in [1, 16]");
  }
  InspectMaps maps = DefaultInspectMaps();
  std::vector<FrameDump> frames;
  for (const std::string_view object : SplitObjects(text)) {
    json frame;
    try {
      frame = json::parse(object);
    } catch (const json::exception& e) {
      throw FormatError(std::string("invalid frame object: ") + e.what());
    }
    try {
      frames.push_back(ParseInspectFrame(frame, maps, options));
    } catch (const json::exception& e) {
      throw FormatError(std::string("malformed frame object: ") + e.what());
    }
  }
  SortByFrameIndex(frames);
  return frames;
}

}  // namespace mvflow
