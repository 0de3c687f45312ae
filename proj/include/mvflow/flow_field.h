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

#ifndef MVFLOW_FLOW_FIELD_H_
#define MVFLOW_FLOW_FIELD_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mvflow {

// Displacement in pixels. Backward convention: the pixel at (x, y) in frame
// n originates from (x + u, y + v) in frame n-1.
struct FlowVector {
  float u = 0.0f;
  float v = 0.0f;

  friend bool operator==(const FlowVector&, const FlowVector&) = default;
  FlowVector operator-() const { return {-u, -v}; }
};

// Dense W x H two-channel field, (u, v) interleaved in row-major order.
class DenseFlowField {
 public:
  DenseFlowField() = default;
  DenseFlowField(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  FlowVector at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {data_[i], data_[i + 1]};
  }
  void set(int x, int y, FlowVector value) {
    const std::size_t i = index(x, y);
    data_[i] = value.u;
    data_[i + 1] = value.v;
  }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

 private:
  std::size_t index(int x, int y) const {
    return 2 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x));
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Same dimensions and identical float bit patterns (NaN payloads included).
bool BitwiseEqual(const DenseFlowField& a, const DenseFlowField& b);

// 8-bit single-channel image: luma frames, binary masks, provenance maps.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

// Interleaved 8-bit RGB.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

}  // namespace mvflow

#endif  // MVFLOW_FLOW_FIELD_H_
