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

#ifndef MVFLOW_COMPLETE_H_
#define MVFLOW_COMPLETE_H_

#include "mvflow/motion_field.h"

namespace mvflow {

// Bidirectional motion vector completion. Every empty cell of |past| whose
// co-located |future| cell holds a vector receives the negated future vector
// (provenance kBmvcInferred). Non-empty past cells pass through unchanged;
// cells empty in both stay empty. Throws DimensionError on grid mismatch.
SparseMotionField BmvcFill(const SparseMotionField& past,
                           const SparseMotionField& future);

}  // namespace mvflow

#endif  // MVFLOW_COMPLETE_H_
