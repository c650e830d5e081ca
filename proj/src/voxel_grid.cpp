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

#include "ovlift/voxel_grid.hpp"

#include <cmath>

namespace ovlift {
namespace {

std::size_t intersection_size(const VoxelSet& a, const VoxelSet& b) {
  const VoxelSet& small = a.size() <= b.size() ? a : b;
  const VoxelSet& large = a.size() <= b.size() ? b : a;
  std::size_t count = 0;
  for (const VoxelKey& k : small.keys)
    if (large.contains(k)) ++count;
  return count;
}

}  // namespace

void VoxelSet::merge(const VoxelSet& other) {
  if (voxel_size != other.voxel_size)
    throw ConfigError("voxel merge: resolutions differ");
  keys.insert(other.keys.begin(), other.keys.end());
}

VoxelSet voxelize(const std::vector<Point3>& points, double voxel_size,
                  std::size_t* rejected) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size))
    throw ConfigError("voxelize: voxel_size must be positive and finite");
  VoxelSet set;
  set.voxel_size = voxel_size;
  set.keys.reserve(points.size());
  std::size_t skipped = 0;
  for (const Point3& p : points) {
    if (!p.allFinite()) {
      ++skipped;
      continue;
    }
    set.keys.insert(VoxelKey{static_cast<std::int64_t>(std::floor(p.x() / voxel_size)),
                             static_cast<std::int64_t>(std::floor(p.y() / voxel_size)),
                             static_cast<std::int64_t>(std::floor(p.z() / voxel_size))});
  }
  if (rejected) *rejected = skipped;
  return set;
}

double voxel_iou(const VoxelSet& a, const VoxelSet& b) {
  if (a.voxel_size != b.voxel_size)
    throw ConfigError("voxel_iou: resolutions differ");
  if (a.empty() && b.empty()) return 0.0;
  const std::size_t inter = intersection_size(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double voxel_containment(const VoxelSet& b, const VoxelSet& a) {
  if (a.voxel_size != b.voxel_size)
    throw ConfigError("voxel_containment: resolutions differ");
  if (b.empty()) throw ValidationError("voxel_containment: empty inner set");
  return static_cast<double>(intersection_size(a, b)) / static_cast<double>(b.size());
}

bool overlap(const VoxelSet& a, const VoxelSet& b, double tau_iou, double tau_cont) {
  return voxel_iou(a, b) >= tau_iou || voxel_containment(b, a) >= tau_cont;
}

}  // namespace ovlift
