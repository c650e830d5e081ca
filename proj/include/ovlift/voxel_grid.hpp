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
#include <unordered_set>
#include <vector>

#include "ovlift/error.hpp"
#include "ovlift/geometry.hpp"

namespace ovlift {

// Integer cell index. A point p maps to floor(p / voxel_size) per axis, so a
// coordinate exactly on a cell boundary belongs to the higher-index cell.
struct VoxelKey {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  friend bool operator==(const VoxelKey& a, const VoxelKey& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    // splitmix64-style mix of the three packed coordinates
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(k.y) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= static_cast<std::uint64_t>(k.z) + 0x94d049bb133111ebull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

// Set of occupied cells at a fixed resolution.
struct VoxelSet {
  double voxel_size = 0.0;
  std::unordered_set<VoxelKey, VoxelKeyHash> keys;

  std::size_t size() const { return keys.size(); }
  bool empty() const { return keys.empty(); }
  bool contains(const VoxelKey& k) const { return keys.count(k) > 0; }

  // In-place union; throws ConfigError when resolutions differ.
  void merge(const VoxelSet& other);
};

// Quantizes a point set; non-finite points are skipped and counted in
// *rejected when provided. Throws ConfigError unless voxel_size > 0.
VoxelSet voxelize(const std::vector<Point3>& points, double voxel_size,
                  std::size_t* rejected = nullptr);

// |A ∩ B| / |A ∪ B|; 0 when both sets are empty. Symmetric.
double voxel_iou(const VoxelSet& a, const VoxelSet& b);

// Fraction of b's cells inside a: |A ∩ B| / |B|. Directional; throws
// ValidationError when b is empty.
double voxel_containment(const VoxelSet& b, const VoxelSet& a);

// Spatial-overlap gate between an accumulated set a and an incoming set b:
//   IoU(a, b) >= tau_iou  OR  containment(b -> a) >= tau_cont.
bool overlap(const VoxelSet& a, const VoxelSet& b, double tau_iou, double tau_cont);

}  // namespace ovlift
