// Copyright 2026 The ovlift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ovlift/geometry.hpp"
#include "ovlift/vocabulary.hpp"
#include "ovlift/voxel_grid.hpp"

namespace ovlift {

// Binary segmentation of one frame for one queried category. bits is
// row-major height x width, nonzero = member. s_query grades how well the
// region matches the query.
struct CategoryMask {
  int frame_id = 0;
  Category category;
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;
  double s_query = 1.0;
};

// Per-frame presence scores: for each category queried in the frame, the
// provider's estimate that the category appears at all.
struct FramePresence {
  int frame_id = 0;
  std::map<Category, double> scores;

  double score_for(const Category& category) const;  // ValidationError if absent
};

// s = s_query * s_pres; both factors must lie in [0, 1] (ValidationError).
double compose_confidence(double s_query, double s_pres);

// One single-view piece of evidence: the lifted points of one mask, with the
// category, composed confidence, and source frame remembered, plus the
// quantized footprint and its spatial extent used by the merge stage.
struct Fragment {
  std::vector<Point3> points;
  Category category;
  double confidence = 0.0;
  int frame_id = 0;
  VoxelSet voxels;
  double extent = 0.0;  // volume of the axis-aligned bounding box
};

// Append-order fragment store; the index of a fragment is its identity.
struct FragmentMemory {
  std::vector<Fragment> fragments;

  std::size_t size() const { return fragments.size(); }
  const Fragment& operator[](std::size_t i) const { return fragments[i]; }
};

// Lifts one mask into a fragment. Returns nullopt when no point survives
// depth validation and outlier filtering. Throws ValidationError when the
// presence table lacks the mask's category or dimensions disagree.
std::optional<Fragment> build_fragment(const CategoryMask& mask,
                                       const FramePresence& presence,
                                       const DepthMap& depth,
                                       const CameraIntrinsics& intrinsics,
                                       const CameraPose& pose, double voxel_size);

// All per-frame inputs needed to build fragments; borrowed, not owned.
struct FrameInputs {
  int frame_id = 0;
  const CameraIntrinsics* intrinsics = nullptr;
  const CameraPose* pose = nullptr;
  const DepthMap* depth = nullptr;
  const std::vector<CategoryMask>* masks = nullptr;
  const FramePresence* presence = nullptr;
};

// Builds the whole memory: frames in the given order; within a frame, masks
// in vocabulary order of their category (file order among masks sharing a
// category). Masks whose category is outside the vocabulary raise
// ValidationError. Fragments with fewer than min_points points are dropped.
FragmentMemory build_fragment_memory(const std::vector<FrameInputs>& frames,
                                     const SceneVocabulary& vocabulary,
                                     double voxel_size, int min_points);

}  // namespace ovlift
