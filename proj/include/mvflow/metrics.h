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

#ifndef MVFLOW_METRICS_H_
#define MVFLOW_METRICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mvflow/flow_field.h"

namespace mvflow {

// Binary per-pixel mask.
class PixelMask {
 public:
  PixelMask() = default;
  PixelMask(int width, int height, bool fill = false);
  // Nonzero pixels are true (PGM 255 / RAW_PLANAR nonzero).
  static PixelMask FromImage(const GrayImage& image);

  int width() const { return width_; }
  int height() const { return height_; }
  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }
  std::size_t CountTrue() const;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Pixels whose ground-truth vector is finite in both components.
PixelMask ValidMaskFromGroundTruth(const DenseFlowField& gt);

// detail: true = high detail; rigid: true = non-rigid; sky: true = sky.
struct SemanticMaskSet {
  std::optional<PixelMask> detail;
  std::optional<PixelMask> rigid;
  std::optional<PixelMask> sky;
};

// Ground-truth magnitude bins: SHORT [0, short_medium), MEDIUM
// [short_medium, medium_big), BIG [medium_big, inf).
struct MagnitudeBins {
  double short_medium = 10.0;
  double medium_big = 40.0;
};

enum class MagnitudeBin { kShort, kMedium, kBig };
MagnitudeBin ClassifyMagnitude(double gt_magnitude, const MagnitudeBins& bins);

// median and mean are NaN iff count == 0. Even counts use the midpoint of the
// two central order statistics.
struct MetricSummary {
  double median = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

MetricSummary Summarize(std::span<const float> values);
MetricSummary Summarize(std::span<const double> values);

struct EpeResult {
  MetricSummary summary;
  // Per-pixel error; NaN where the pixel is not valid.
  std::vector<float> per_pixel;
};

// Euclidean end-point error over the valid pixels.
EpeResult Epe(const DenseFlowField& pred, const DenseFlowField& gt,
              const PixelMask& valid);

// Backward-warps |frame_prev| by |flow| (bilinear, sampled at (x+u, y+v),
// clamped to the edge) and returns the mean squared error against
// |frame_cur| over all pixels.
double Mcmse(const DenseFlowField& flow, const GrayImage& frame_prev,
             const GrayImage& frame_cur);

// Default threshold for "non-zero": half an eighth-pel step.
inline constexpr double kDefaultCoverageEps = 1.0 / 16.0;

// 100 * |{gt moving and pred moving}| / |{gt moving}| over valid pixels, where
// moving means magnitude > eps. NaN when no valid pixel has moving gt.
double Coverage(const DenseFlowField& pred, const DenseFlowField& gt,
                const PixelMask& valid, double eps = kDefaultCoverageEps);

enum class Category : std::uint8_t {
  kGlobal,
  kHighDetails,
  kLowDetails,
  kRigidObjects,
  kNonRigidObjects,
  kSky,
  kNonSky,
  kShortMotion,
  kMediumMotion,
  kBigMotion,
};

inline constexpr int kNumCategories = 10;
inline constexpr std::array<Category, kNumCategories> kAllCategories = {
    Category::kGlobal,       Category::kHighDetails,  Category::kLowDetails,
    Category::kRigidObjects, Category::kNonRigidObjects, Category::kSky,
    Category::kNonSky,       Category::kShortMotion,  Category::kMediumMotion,
    Category::kBigMotion};

// "Global", "High Details", "Non-Rigid Objects", ...
std::string_view CategoryName(Category c);
std::optional<Category> ParseCategory(std::string_view name);

struct CategoryMetrics {
  MetricSummary epe;
  double coverage = 0.0;  // percent, NaN when undefined
};

using CategoryMap = std::map<Category, CategoryMetrics>;

// One valid pixel's error and category membership (bit i = Category i).
struct PixelSample {
  float epe = 0.0f;
  std::uint16_t categories = 0;

  friend bool operator==(const PixelSample&, const PixelSample&) = default;
};

struct FrameMetrics {
  CategoryMap categories;
  std::vector<PixelSample> samples;  // raster order
};

// EPE summary and coverage for every category whose mask is available.
// Categories with an absent mask are omitted; magnitude bins always apply.
FrameMetrics EvaluateFrame(const DenseFlowField& pred, const DenseFlowField& gt,
                           const PixelMask& valid, const SemanticMaskSet& masks,
                           const MagnitudeBins& bins = {},
                           double eps = kDefaultCoverageEps);

CategoryMap MaskedMetrics(const DenseFlowField& pred, const DenseFlowField& gt,
                          const PixelMask& valid, const SemanticMaskSet& masks,
                          const MagnitudeBins& bins = {},
                          double eps = kDefaultCoverageEps);

}  // namespace mvflow

#endif  // MVFLOW_METRICS_H_
