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

#include "mvflow/complete.h"

#include "mvflow/errors.h"

namespace mvflow {

SparseMotionField BmvcFill(const SparseMotionField& past,
                           const SparseMotionField& future) {
  if (past.units_w() != future.units_w() || past.units_h() != future.units_h()) {
    throw DimensionError("past and future unit grids differ in size");
  }
  SparseMotionField out = past;
  for (int uy = 0; uy < past.units_h(); ++uy) {
    for (int ux = 0; ux < past.units_w(); ++ux) {
      Cell& cell = out.at(ux, uy);
      if (cell.provenance != Provenance::kEmpty) continue;
      const Cell& opposite = future.at(ux, uy);
      if (opposite.provenance == Provenance::kEmpty) continue;
      cell.vector = -*opposite.vector;
      cell.provenance = Provenance::kBmvcInferred;
      cell.source_ref_distance = opposite.source_ref_distance;
    }
  }
  return out;
}

}  // namespace mvflow
