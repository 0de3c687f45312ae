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

#include "mvflow/flow_field.h"

#include <bit>
#include <cstdint>

#include "mvflow/errors.h"

namespace mvflow {

DenseFlowField::DenseFlowField(int width, int height)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw DimensionError("flow field dimensions must be non-negative");
  }
  data_.assign(2 * pixel_count(), 0.0f);
}

bool BitwiseEqual(const DenseFlowField& a, const DenseFlowField& b) {
  if (a.width() != b.width() || a.height() != b.height()) return false;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(da[i]) !=
        std::bit_cast<std::uint32_t>(db[i])) {
      return false;
    }
  }
  return true;
}

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w < 0 || h < 0) {
    throw DimensionError("image dimensions must be non-negative");
  }
  pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h),
                fill);
}

}  // namespace mvflow
