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

#include "mvflow/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mvflow/errors.h"

namespace mvflow {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::string_view, kNumCategories> kCategoryNames = {
    "Global", "High Details", "Low Details",   "Rigid Objects",
    "Non-Rigid Objects", "Sky", "Non-sky", "Short Motion",
    "Medium Motion", "Big Motion"};

std::uint16_t Bit(Category c) {
  return static_cast<std::uint16_t>(1u << static_cast<unsigned>(c));
}

void CheckSameDims(int w1, int h1, int w2, int h2, const char* what) {
  if (w1 != w2 || h1 != h2) {
    throw DimensionError(std::string(what) + ": dimension mismatch " +
                         std::to_string(w1) + "x" + std::to_string(h1) +
                         " vs " + std::to_string(w2) + "x" + std::to_string(h2));
  }
}

double Magnitude(FlowVector f) {
  return std::sqrt(static_cast<double>(f.u) * f.u + static_cast<double>(f.v) * f.v);
}

float EndPointError(FlowVector p, FlowVector g) {
  const double du = static_cast<double>(p.u) - g.u;
  const double dv = static_cast<double>(p.v) - g.v;
  const double e = std::sqrt(du * du + dv * dv);
  // A non-finite prediction counts as an unbounded error.
  if (std::isnan(e)) return std::numeric_limits<float>::infinity();
  return static_cast<float>(e);
}

template <typename T>
MetricSummary SummarizeImpl(std::span<const T> values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) {
    s.median = kNaN;
    s.mean = kNaN;
    return s;
  }
  double sum = 0.0;
  for (const T v : values) sum += static_cast<double>(v);
  s.mean = sum / static_cast<double>(values.size());

  std::vector<double> sorted(values.begin(), values.end());
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  const double upper = sorted[mid];
  if (sorted.size() % 2 == 1) {
    s.median = upper;
  } else {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + mid);
    s.median = (lower + upper) / 2.0;
  }
  return s;
}

double Sample(const GrayImage& img, double sx, double sy) {
  sx = std::clamp(sx, 0.0, static_cast<double>(img.width - 1));
  sy = std::clamp(sy, 0.0, static_cast<double>(img.height - 1));
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double tx = sx - x0;
  const double ty = sy - y0;
  const double top = (1.0 - tx) * img.at(x0, y0) + tx * img.at(x1, y0);
  const double bottom = (1.0 - tx) * img.at(x0, y1) + tx * img.at(x1, y1);
  return (1.0 - ty) * top + ty * bottom;
}

}  // namespace

PixelMask::PixelMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw DimensionError("mask dimensions must be non-negative");
  }
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

PixelMask PixelMask::FromImage(const GrayImage& image) {
  PixelMask mask(image.width, image.height);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    mask.bits_[i] = image.pixels[i] != 0 ? 1 : 0;
  }
  return mask;
}

std::size_t PixelMask::CountTrue() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

PixelMask ValidMaskFromGroundTruth(const DenseFlowField& gt) {
  PixelMask valid(gt.width(), gt.height());
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const FlowVector g = gt.at(x, y);
      valid.set(x, y, std::isfinite(g.u) && std::isfinite(g.v));
    }
  }
  return valid;
}

MagnitudeBin ClassifyMagnitude(double gt_magnitude, const MagnitudeBins& bins) {
  if (gt_magnitude < bins.short_medium) return MagnitudeBin::kShort;
  if (gt_magnitude < bins.medium_big) return MagnitudeBin::kMedium;
  return MagnitudeBin::kBig;
}

MetricSummary Summarize(std::span<const float> values) {
  return SummarizeImpl(values);
}

MetricSummary Summarize(std::span<const double> values) {
  return SummarizeImpl(values);
}

EpeResult Epe(const DenseFlowField& pred, const DenseFlowField& gt,
              const PixelMask& valid) {
  CheckSameDims(pred.width(), pred.height(), gt.width(), gt.height(), "epe");
  CheckSameDims(valid.width(), valid.height(), gt.width(), gt.height(),
                "epe valid mask");
  EpeResult result;
  result.per_pixel.assign(gt.pixel_count(), std::numeric_limits<float>::quiet_NaN());
  std::vector<float> errors;
  errors.reserve(gt.pixel_count());
  std::size_t i = 0;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x, ++i) {
      if (!valid.at(x, y)) continue;
      const float e = EndPointError(pred.at(x, y), gt.at(x, y));
      result.per_pixel[i] = e;
      errors.push_back(e);
    }
  }
  result.summary = Summarize(std::span<const float>(errors));
  return result;
}

double Mcmse(const DenseFlowField& flow, const GrayImage& frame_prev,
             const GrayImage& frame_cur) {
  CheckSameDims(frame_prev.width, frame_prev.height, frame_cur.width,
                frame_cur.height, "mcmse frames");
  CheckSameDims(flow.width(), flow.height(), frame_cur.width, frame_cur.height,
                "mcmse flow");
  if (flow.empty()) return kNaN;
  double sum = 0.0;
  for (int y = 0; y < flow.height(); ++y) {
    for (int x = 0; x < flow.width(); ++x) {
      FlowVector f = flow.at(x, y);
      if (!std::isfinite(f.u) || !std::isfinite(f.v)) f = {};
      const double warped = Sample(frame_prev, x + static_cast<double>(f.u),
                                   y + static_cast<double>(f.v));
      const double diff = warped - frame_cur.at(x, y);
      sum += diff * diff;
    }
  }
  return sum / static_cast<double>(flow.pixel_count());
}

double Coverage(const DenseFlowField& pred, const DenseFlowField& gt,
                const PixelMask& valid, double eps) {
  CheckSameDims(pred.width(), pred.height(), gt.width(), gt.height(), "coverage");
  CheckSameDims(valid.width(), valid.height(), gt.width(), gt.height(),
                "coverage valid mask");
  if (eps < 0.0) throw InputError("coverage eps must be >= 0");
  std::size_t moving = 0;
  std::size_t both = 0;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (!valid.at(x, y) || !(Magnitude(gt.at(x, y)) > eps)) continue;
      ++moving;
      if (Magnitude(pred.at(x, y)) > eps) ++both;
    }
  }
  if (moving == 0) return kNaN;
  return 100.0 * static_cast<double>(both) / static_cast<double>(moving);
}

std::string_view CategoryName(Category c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<Category> ParseCategory(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

FrameMetrics EvaluateFrame(const DenseFlowField& pred, const DenseFlowField& gt,
                           const PixelMask& valid, const SemanticMaskSet& masks,
                           const MagnitudeBins& bins, double eps) {
  CheckSameDims(pred.width(), pred.height(), gt.width(), gt.height(), "evaluate");
  CheckSameDims(valid.width(), valid.height(), gt.width(), gt.height(),
                "evaluate valid mask");
  for (const auto* mask : {&masks.detail, &masks.rigid, &masks.sky}) {
    if (*mask) {
      CheckSameDims(mask->value().width(), mask->value().height(), gt.width(),
                    gt.height(), "semantic mask");
    }
  }
  if (eps < 0.0) throw InputError("coverage eps must be >= 0");

  std::uint16_t present = Bit(Category::kGlobal) | Bit(Category::kShortMotion) |
                          Bit(Category::kMediumMotion) | Bit(Category::kBigMotion);
  if (masks.detail) present |= Bit(Category::kHighDetails) | Bit(Category::kLowDetails);
  if (masks.rigid) {
    present |= Bit(Category::kRigidObjects) | Bit(Category::kNonRigidObjects);
  }
  if (masks.sky) present |= Bit(Category::kSky) | Bit(Category::kNonSky);

  FrameMetrics out;
  std::array<std::size_t, kNumCategories> moving{};
  std::array<std::size_t, kNumCategories> both{};
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (!valid.at(x, y)) continue;
      const FlowVector g = gt.at(x, y);
      const FlowVector p = pred.at(x, y);
      std::uint16_t bits = Bit(Category::kGlobal);
      if (masks.detail) {
        bits |= Bit(masks.detail->at(x, y) ? Category::kHighDetails
                                           : Category::kLowDetails);
      }
      if (masks.rigid) {
        bits |= Bit(masks.rigid->at(x, y) ? Category::kNonRigidObjects
                                          : Category::kRigidObjects);
      }
      if (masks.sky) {
        bits |= Bit(masks.sky->at(x, y) ? Category::kSky : Category::kNonSky);
      }
      const double gt_mag = Magnitude(g);
      switch (ClassifyMagnitude(gt_mag, bins)) {
        case MagnitudeBin::kShort:
          bits |= Bit(Category::kShortMotion);
          break;
        case MagnitudeBin::kMedium:
          bits |= Bit(Category::kMediumMotion);
          break;
        case MagnitudeBin::kBig:
          bits |= Bit(Category::kBigMotion);
          break;
      }
      out.samples.push_back({EndPointError(p, g), bits});
      if (gt_mag > eps) {
        const bool pred_moving = Magnitude(p) > eps;
        for (int c = 0; c < kNumCategories; ++c) {
          if (!(bits & (1u << c))) continue;
          ++moving[c];
          if (pred_moving) ++both[c];
        }
      }
    }
  }

  std::vector<float> values;
  for (const Category c : kAllCategories) {
    if (!(present & Bit(c))) continue;
    values.clear();
    for (const PixelSample& s : out.samples) {
      if (s.categories & Bit(c)) values.push_back(s.epe);
    }
    CategoryMetrics m;
    m.epe = Summarize(std::span<const float>(values));
    const auto ci = static_cast<std::size_t>(c);
    m.coverage = moving[ci] == 0 ? kNaN
                                 : 100.0 * static_cast<double>(both[ci]) /
                                       static_cast<double>(moving[ci]);
    out.categories.emplace(c, m);
  }
  return out;
}

CategoryMap MaskedMetrics(const DenseFlowField& pred, const DenseFlowField& gt,
                          const PixelMask& valid, const SemanticMaskSet& masks,
                          const MagnitudeBins& bins, double eps) {
  return EvaluateFrame(pred, gt, valid, masks, bins, eps).categories;
}

}  // namespace mvflow
