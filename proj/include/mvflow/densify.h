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

#ifndef MVFLOW_DENSIFY_H_
#define MVFLOW_DENSIFY_H_

#include "mvflow/flow_field.h"
#include "mvflow/motion_field.h"

namespace mvflow {

// Zero-order hold: pixel (x, y) takes the vector of unit (x / 4, y / 4);
// empty units become (0, 0). Output is units_w*4 x units_h*4.
DenseFlowField UpsampleZoh(const SparseMotionField& field);

// Per-pixel provenance at the same resolution as UpsampleZoh:
// 0 = empty, 128 = BMVC-inferred, 255 = coded.
GrayImage UpsampleProvenance(const SparseMotionField& field);

inline constexpr std::uint8_t kProvenanceEmptyLevel = 0;
inline constexpr std::uint8_t kProvenanceBmvcLevel = 128;
inline constexpr std::uint8_t kProvenanceCodedLevel = 255;

// Top-left anchored crop. Throws DimensionError when the display size exceeds
// the field or is not positive.
DenseFlowField CropToDisplay(const DenseFlowField& dense, int display_w,
                             int display_h);
GrayImage CropToDisplay(const GrayImage& image, int display_w, int display_h);

// factor x factor mean pooling after edge-replication padding to a multiple of
// |factor|. Values are not rescaled.
DenseFlowField MeanPool(const DenseFlowField& dense, int factor);

// Coarse warm-start initialization: MeanPool, then every value divided by
// |factor| so vectors are in coarse-grid pixel units. Throws for factor < 1.
DenseFlowField DownsampleWarmstart(const DenseFlowField& dense, int factor = 8);

}  // namespace mvflow

#endif  // MVFLOW_DENSIFY_H_
