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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ovlift/geometry.hpp"
#include "ovlift/scene_io.hpp"
#include "ovlift/vocabulary.hpp"

namespace ovlift {

// One synthetic object: an axis-aligned solid box with a ground-truth label
// and the synonym pool label-swap noise may draw from.
struct ObjectSpec {
  Category label;
  Aabb box;
  std::vector<Category> synonyms;
};

// Circular camera rig around the objects' centroid, elevated and looking at
// the centroid.
struct CameraRig {
  int count = 16;
  double radius = 3.0;
  double height = 2.6;
  double fov_deg = 60.0;  // horizontal field of view
};

struct SceneSpec {
  Aabb room{{-3.0, -3.0, 0.0}, {3.0, 3.0, 3.0}};
  std::vector<ObjectSpec> objects;
  CameraRig cameras;
  int image_width = 64;
  int image_height = 64;
  int max_names_per_frame = 5;   // length cap of each emitted proposal line
  int vertices_per_object = 200;
  std::uint64_t seed = 0;
  // When set, emitted poses and depths live in a distorted reconstruction
  // frame (p' = s R p + t) and the scene carries a metric reference pose and
  // depth map for frame 0. Ground truth stays metric.
  std::optional<SimilarityTransform> pose_distortion;

  void validate() const;
};

// Corruption applied on top of the exact renders.
struct NoiseSpec {
  double label_swap_prob = 0.0;   // chance a mask's label is redrawn from its group
  double depth_sigma = 0.0;       // additive Gaussian depth noise, meters
  double confidence_jitter = 0.0; // s_query = 1 - uniform(0, jitter)

  void validate() const;
};

// Parses the JSON scene description (see README for the schema). Returns the
// scene together with the embedded noise settings.
std::pair<SceneSpec, NoiseSpec> parse_scene_spec(const std::string& json_text);

// Shared intrinsics of every rig camera.
CameraIntrinsics rig_intrinsics(const SceneSpec& spec);

// World-to-camera poses of the rig, frame order.
std::vector<CameraPose> rig_poses(const SceneSpec& spec);

// Exact render of one view: per-pixel depth of the nearest box along the ray
// through the integer pixel coordinate (0 = no hit), and the owning object
// index (-1 = background).
struct RenderResult {
  DepthMap depth;
  std::vector<int> object_ids;
};

RenderResult render_frame(const SceneSpec& spec, const CameraIntrinsics& intrinsics,
                          const CameraPose& pose);

// Pixels covered per [frame][object] in the exact renders.
std::vector<std::vector<int>> visibility_pixel_counts(const SceneSpec& spec);

// Writes a complete scene directory (manifest, intrinsics, poses, depth,
// masks, vocab, groups when synonyms exist, ground truth, and the metric
// reference files when pose_distortion is set). Deterministic: equal inputs
// produce byte-identical directories.
void generate_scene(const SceneSpec& spec, const NoiseSpec& noise,
                    const std::filesystem::path& out_dir);

}  // namespace ovlift
