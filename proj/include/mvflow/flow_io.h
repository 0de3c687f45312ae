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

#ifndef MVFLOW_FLOW_IO_H_
#define MVFLOW_FLOW_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvflow/flow_field.h"

namespace mvflow {

enum class FlowFileFormat { kMiddleburyFlo, kRawPlanar };

inline constexpr float kFloMagic = 202021.25f;

// Middlebury .flo: float32 202021.25, int32 width, int32 height, then
// height x width interleaved (u, v) float32, all little-endian. Payload floats
// are copied bit-for-bit, so NaN and infinities survive.
DenseFlowField ReadFlo(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> WriteFlo(const DenseFlowField& field);

// RAW_PLANAR: "MVF1", uint32 width, uint32 height, the u plane, then the v
// plane, little-endian float32.
DenseFlowField ReadRawPlanar(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> WriteRawPlanar(const DenseFlowField& field);

// Single-plane RAW_PLANAR, used for masks: nonzero -> 255, zero -> 0.
GrayImage ReadRawPlanarMask(std::span<const std::uint8_t> bytes);

// Dispatches on the leading magic bytes.
DenseFlowField ReadFlowBytes(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> WriteFlowBytes(const DenseFlowField& field,
                                         FlowFileFormat format);
const char* FlowFileExtension(FlowFileFormat format);

// Binary PGM (P5, maxval <= 255).
GrayImage ReadPgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> WritePgm(const GrayImage& image);

// Binary PPM (P6, maxval 255).
std::vector<std::uint8_t> WritePpm(const RgbImage& image);

// Number of hues in the flow color wheel.
inline constexpr int kColorWheelSize = 55;

// RGB of wheel entry |k| in [0, kColorWheelSize).
std::array<std::uint8_t, 3> ColorWheelEntry(int k);

// Flow color coding: angle selects the hue on the color wheel, magnitude
// (divided by |max_magnitude|, or by the field's 99th-percentile magnitude
// when absent) sets saturation from white. Out-of-range vectors are darkened;
// non-finite vectors are black.
RgbImage Colorize(const DenseFlowField& field,
                  std::optional<float> max_magnitude = std::nullopt);

// Exact nearest-rank 99th percentile of the finite vector magnitudes.
double MagnitudePercentile99(const DenseFlowField& field);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace mvflow

#endif  // MVFLOW_FLOW_IO_H_
