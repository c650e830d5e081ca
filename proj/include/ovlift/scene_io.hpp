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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ovlift/evaluation.hpp"
#include "ovlift/evidence.hpp"
#include "ovlift/fragments.hpp"
#include "ovlift/geometry.hpp"

// On-disk scene layout.
//
//   manifest.json            frame count, resolution, file -> content hash
//   intrinsics.txt           "frame <id> <fx> <fy> <cx> <cy> <width> <height>"
//   poses.txt                "frame <id> <r00..r22 row-major> <tx> <ty> <tz>"
//   depth/frame_NNNNNN.gd1   binary depth map, see below
//   masks/frame_NNNNNN.txt   per-frame masks + scores, see below
//   vocab.txt                line i = raw category proposals for frame i
//   groups.txt               optional grouping response
//   gt_boxes.txt             optional "label <name> box <6 floats>"
//   gt_vertices.txt          optional labeled vertices
//   ref_pose.txt             optional metric reference pose for frame 0
//   ref_depth.gd1            optional metric reference depth for frame 0
//
// Depth format (GD1): one ASCII header line "GD1 <width> <height>\n" followed
// by width*height little-endian float32 values, row-major. Non-positive or
// non-finite values mark invalid pixels.
//
// Mask file format: header lines "frame <id>" and "size <height> <width>",
// then per mask a line "cat <name> <s_query> <s_pres>" followed by one line
// of run-length spans "<start>:<length> ..." over the row-major pixel index,
// 0-indexed, ascending, non-overlapping. Multiple masks may share a category.

namespace ovlift {

// FNV-1a 64-bit content hash, used by scene manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t hash_file(const std::filesystem::path& path);

struct SceneManifest {
  int frames = 0;
  int width = 0;
  int height = 0;
  std::map<std::string, std::string> file_hashes;  // relative path -> 16 hex chars
};

void write_manifest(const std::filesystem::path& dir, const SceneManifest& manifest);
SceneManifest read_manifest(const std::filesystem::path& dir);
// Throws ValidationError when a listed file is missing or its hash differs.
void verify_manifest(const std::filesystem::path& dir, const SceneManifest& manifest);

// Run-length encoding over a row-major binary mask: maximal runs of set
// pixels as (start, length), ascending.
std::vector<std::pair<std::uint32_t, std::uint32_t>> encode_rle(
    const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> decode_rle(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& runs, std::size_t size);

void write_depth(const std::filesystem::path& path, const DepthMap& depth);
DepthMap read_depth(const std::filesystem::path& path);

struct MaskFileData {
  int frame_id = 0;
  int height = 0;
  int width = 0;
  std::vector<CategoryMask> masks;
  FramePresence presence;
};

void write_mask_file(const std::filesystem::path& path, const MaskFileData& data);
MaskFileData read_mask_file(const std::filesystem::path& path);

void write_intrinsics(const std::filesystem::path& path,
                      const std::vector<std::pair<int, CameraIntrinsics>>& entries);
std::map<int, CameraIntrinsics> read_intrinsics(const std::filesystem::path& path);

void write_poses(const std::filesystem::path& path,
                 const std::vector<std::pair<int, CameraPose>>& entries);
std::map<int, CameraPose> read_poses(const std::filesystem::path& path);

void write_gt_boxes(const std::filesystem::path& path,
                    const std::vector<GroundTruthBox>& boxes);
std::vector<GroundTruthBox> read_gt_boxes(const std::filesystem::path& path);

void write_gt_vertices(const std::filesystem::path& path, const GroundTruthVertexSet& set);
GroundTruthVertexSet read_gt_vertices(const std::filesystem::path& path);

// Detection file: one "label <name> score <s> box <x0> <y0> <z0> <x1> <y1>
// <z1>" line per instance, fixed six decimals, in instance order.
void write_detections(const std::filesystem::path& path, const std::vector<Instance>& instances);
std::vector<Detection> read_detections(const std::filesystem::path& path);

// Instance point sidecar, index-paired with a detection file: header
// "IP1 <instance count>", then per instance "instance <k> points <n>"
// followed by n "<x> <y> <z>" lines.
void write_instance_points(const std::filesystem::path& path,
                           const std::vector<Instance>& instances);
std::vector<std::vector<Point3>> read_instance_points(const std::filesystem::path& path);

// Uniformly spread sample of `budget` frame indices over [0, total), always
// including frame 0 (and the last frame when budget > 1). Identity when
// budget >= total.
std::vector<int> sample_frame_indices(int total, int budget);

struct FrameData {
  int frame_id = 0;
  CameraIntrinsics intrinsics;
  CameraPose pose;
  DepthMap depth;
  std::vector<CategoryMask> masks;
  FramePresence presence;
  std::string vocab_line;
};

struct SceneBundle {
  std::vector<FrameData> frames;  // sampled, ascending frame id
  int width = 0;
  int height = 0;
  std::optional<std::string> grouping_text;
  std::optional<std::vector<GroundTruthBox>> gt_boxes;
  std::optional<GroundTruthVertexSet> gt_vertices;
  std::optional<CameraPose> ref_pose;
  std::optional<DepthMap> ref_depth;
};

// Loads a scene directory: verifies the manifest, samples at most
// frame_budget frames, and reads everything the pipeline needs. Enforces one
// resolution across depth maps, masks, and intrinsics.
SceneBundle load_scene(const std::filesystem::path& dir, int frame_budget);

}  // namespace ovlift
