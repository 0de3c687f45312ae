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

#include "mvflow/densify.h"

#include <algorithm>
#include <string>

#include "mvflow/errors.h"

namespace mvflow {
namespace {

void CheckCrop(int src_w, int src_h, int display_w, int display_h) {
  if (display_w <= 0 || display_h <= 0) {
    throw DimensionError("display dimensions must be positive");
  }
  if (display_w > src_w || display_h > src_h) {
    throw DimensionError("display " + std::to_string(display_w) + "x" +
                         std::to_string(display_h) + " exceeds coded " +
                         std::to_string(src_w) + "x" + std::to_string(src_h));
  }
}

// Mean over each padded factor x factor block, divided by |divisor|. The
// division happens in double so the result is rounded to float once.
DenseFlowField PoolBlocks(const DenseFlowField& dense, int factor,
                          double divisor) {
  if (dense.empty()) throw DimensionError("cannot pool an empty field");
  const int out_w = (dense.width() + factor - 1) / factor;
  const int out_h = (dense.height() + factor - 1) / factor;
  DenseFlowField out(out_w, out_h);
  const double denom = static_cast<double>(factor) * factor * divisor;
  for (int cy = 0; cy < out_h; ++cy) {
    for (int cx = 0; cx < out_w; ++cx) {
      double su = 0.0;
      double sv = 0.0;
      for (int dy = 0; dy < factor; ++dy) {
        const int y = std::min(cy * factor + dy, dense.height() - 1);
        for (int dx = 0; dx < factor; ++dx) {
          const int x = std::min(cx * factor + dx, dense.width() - 1);
          const FlowVector f = dense.at(x, y);
          su += f.u;
          sv += f.v;
        }
      }
      out.set(cx, cy, {static_cast<float>(su / denom),
                       static_cast<float>(sv / denom)});
    }
  }
  return out;
}

}  // namespace

DenseFlowField UpsampleZoh(const SparseMotionField& field) {
  DenseFlowField dense(field.units_w() * kUnitSize, field.units_h() * kUnitSize);
  for (int y = 0; y < dense.height(); ++y) {
    for (int x = 0; x < dense.width(); ++x) {
      const Cell& cell = field.at(x / kUnitSize, y / kUnitSize);
      if (cell.vector) dense.set(x, y, *cell.vector);
    }
  }
  return dense;
}

GrayImage UpsampleProvenance(const SparseMotionField& field) {
  GrayImage image(field.units_w() * kUnitSize, field.units_h() * kUnitSize);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      switch (field.at(x / kUnitSize, y / kUnitSize).provenance) {
        case Provenance::kEmpty:
          image.at(x, y) = kProvenanceEmptyLevel;
          break;
        case Provenance::kCoded:
          image.at(x, y) = kProvenanceCodedLevel;
          break;
        case Provenance::kBmvcInferred:
          image.at(x, y) = kProvenanceBmvcLevel;
          break;
      }
    }
  }
  return image;
}

DenseFlowField CropToDisplay(const DenseFlowField& dense, int display_w,
                             int display_h) {
  CheckCrop(dense.width(), dense.height(), display_w, display_h);
  DenseFlowField out(display_w, display_h);
  const auto src = dense.data();
  auto dst = out.data();
  const std::size_t row = 2 * static_cast<std::size_t>(display_w);
  for (int y = 0; y < display_h; ++y) {
    const auto offset = 2 * static_cast<std::size_t>(y) * dense.width();
    std::copy_n(src.begin() + offset, row, dst.begin() + y * row);
  }
  return out;
}

GrayImage CropToDisplay(const GrayImage& image, int display_w, int display_h) {
  CheckCrop(image.width, image.height, display_w, display_h);
  GrayImage out(display_w, display_h);
  for (int y = 0; y < display_h; ++y) {
    std::copy_n(image.pixels.begin() + static_cast<std::size_t>(y) * image.width,
                display_w,
                out.pixels.begin() + static_cast<std::size_t>(y) * display_w);
  }
  return out;
}

DenseFlowField MeanPool(const DenseFlowField& dense, int factor) {
  if (factor < 1) throw InputError("pooling factor must be >= 1");
  return PoolBlocks(dense, factor, 1.0);
}

DenseFlowField DownsampleWarmstart(const DenseFlowField& dense, int factor) {
  if (factor < 1) throw InputError("warm-start factor must be >= 1");
  return PoolBlocks(dense, factor, static_cast<double>(factor));
}

}  // namespace mvflow
