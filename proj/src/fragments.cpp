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

#include "ovlift/fragments.hpp"

#include <cmath>
#include <string>

namespace ovlift {

double FramePresence::score_for(const Category& category) const {
  const auto it = scores.find(category);
  if (it == scores.end())
    throw ValidationError("presence score missing for category: " + category.str());
  return it->second;
}

double compose_confidence(double s_query, double s_pres) {
  const auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_unit(s_query) || !in_unit(s_pres))
    throw ValidationError("confidence factors must lie in [0, 1]");
  return s_query * s_pres;
}

std::optional<Fragment> build_fragment(const CategoryMask& mask,
                                       const FramePresence& presence,
                                       const DepthMap& depth,
                                       const CameraIntrinsics& intrinsics,
                                       const CameraPose& pose, double voxel_size) {
  if (mask.frame_id != presence.frame_id)
    throw ValidationError("build_fragment: mask and presence frame ids differ");
  const double confidence =
      compose_confidence(mask.s_query, presence.score_for(mask.category));

  Fragment fragment;
  fragment.points =
      lift_mask(mask.bits, mask.height, mask.width, depth, intrinsics, pose);
  if (fragment.points.empty()) return std::nullopt;

  fragment.category = mask.category;
  fragment.confidence = confidence;
  fragment.frame_id = mask.frame_id;
  fragment.voxels = voxelize(fragment.points, voxel_size);
  fragment.extent = Aabb::of_points(fragment.points).volume();
  return fragment;
}

FragmentMemory build_fragment_memory(const std::vector<FrameInputs>& frames,
                                     const SceneVocabulary& vocabulary,
                                     double voxel_size, int min_points) {
  if (min_points < 1) throw ConfigError("build_fragment_memory: min_points must be >= 1");

  FragmentMemory memory;
  for (const FrameInputs& frame : frames) {
    // Stable bucket sort of this frame's masks by vocabulary index.
    std::vector<std::vector<const CategoryMask*>> by_category(vocabulary.size());
    for (const CategoryMask& mask : *frame.masks) {
      const auto index = vocabulary.index_of(mask.category);
      if (!index)
        throw ValidationError("mask category outside scene vocabulary: " +
                              mask.category.str());
      by_category[*index].push_back(&mask);
    }
    for (const auto& bucket : by_category) {
      for (const CategoryMask* mask : bucket) {
        auto fragment = build_fragment(*mask, *frame.presence, *frame.depth,
                                       *frame.intrinsics, *frame.pose, voxel_size);
        if (fragment && fragment->points.size() >= static_cast<std::size_t>(min_points))
          memory.fragments.push_back(std::move(*fragment));
      }
    }
  }
  return memory;
}

}  // namespace ovlift
