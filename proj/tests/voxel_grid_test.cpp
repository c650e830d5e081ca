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

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "ovlift/rng.hpp"
#include "ovlift/voxel_grid.hpp"

using namespace ovlift;

namespace {

VoxelSet set_of(std::initializer_list<std::array<std::int64_t, 3>> keys,
                double voxel_size = 0.05) {
  VoxelSet set;
  set.voxel_size = voxel_size;
  for (const auto& k : keys) set.keys.insert(VoxelKey{k[0], k[1], k[2]});
  return set;
}

// Independent quantize-and-count path: sorted unique key tuples, set
// intersection by merge. Ratios are formed with the same integer-to-double
// division so agreement must be bitwise.
struct OracleCounts {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t both = 0;
};

std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> oracle_quantize(
    const std::vector<Point3>& points, double voxel_size) {
  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> keys;
  for (const Point3& p : points) {
    if (!p.allFinite()) continue;
    keys.emplace_back(static_cast<std::int64_t>(std::floor(p.x() / voxel_size)),
                      static_cast<std::int64_t>(std::floor(p.y() / voxel_size)),
                      static_cast<std::int64_t>(std::floor(p.z() / voxel_size)));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

OracleCounts oracle_counts(const std::vector<Point3>& points_a,
                           const std::vector<Point3>& points_b, double voxel_size) {
  const auto a = oracle_quantize(points_a, voxel_size);
  const auto b = oracle_quantize(points_b, voxel_size);
  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return OracleCounts{a.size(), b.size(), both.size()};
}

}  // namespace

TEST_SUITE("voxel_grid") {

TEST_CASE("quantization floors toward negative infinity") {
  const auto set = voxelize({{0.12, -0.01, 0.26}}, 0.05);
  REQUIRE(set.size() == 1);
  CHECK(set.contains(VoxelKey{2, -1, 5}));

  // A coordinate exactly on a boundary belongs to the upper cell.
  const auto edge = voxelize({{0.05, -0.05, 0.0}}, 0.05);
  CHECK(edge.contains(VoxelKey{1, -1, 0}));
}

TEST_CASE("voxelize skips and counts non-finite points") {
  std::size_t rejected = 0;
  const auto set = voxelize({{0.0, 0.0, 0.0},
                             {std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0},
                             {0.0, std::numeric_limits<double>::infinity(), 0.0}},
                            0.05, &rejected);
  CHECK(set.size() == 1);
  CHECK(rejected == 2);

  CHECK_THROWS_AS(voxelize({}, 0.0), ConfigError);
  CHECK_THROWS_AS(voxelize({}, -1.0), ConfigError);
}

TEST_CASE("iou and containment on a two-cell overlap") {
  const VoxelSet a = set_of({{0, 0, 0}, {1, 0, 0}});
  const VoxelSet b = set_of({{1, 0, 0}, {2, 0, 0}});
  CHECK(voxel_iou(a, b) == 1.0 / 3.0);
  CHECK(voxel_iou(b, a) == 1.0 / 3.0);  // symmetric
  CHECK(voxel_containment(b, a) == 0.5);
}

TEST_CASE("empty-set conventions") {
  const VoxelSet empty = set_of({});
  const VoxelSet a = set_of({{0, 0, 0}});
  CHECK(voxel_iou(empty, empty) == 0.0);
  CHECK(voxel_iou(a, empty) == 0.0);
  CHECK(voxel_containment(a, empty) == 0.0);          // no cell of a inside empty
  CHECK_THROWS_AS(voxel_containment(empty, a), ValidationError);
}

TEST_CASE("resolution mismatches are rejected") {
  const VoxelSet a = set_of({{0, 0, 0}}, 0.05);
  const VoxelSet b = set_of({{0, 0, 0}}, 0.10);
  CHECK_THROWS_AS((void)voxel_iou(a, b), ConfigError);
  CHECK_THROWS_AS((void)voxel_containment(a, b), ConfigError);
  VoxelSet c = a;
  CHECK_THROWS_AS(c.merge(b), ConfigError);
}

TEST_CASE("containment direction: small set swallowed by a large one") {
  // 200-cell line vs a 10-cell set sharing exactly one cell. IoU is diluted
  // to 1/209 but one tenth of the small set lies inside the large one, so
  // only the containment arm of the gate fires -- and only in this order.
  VoxelSet large;
  large.voxel_size = 0.05;
  for (std::int64_t x = 0; x < 200; ++x) large.keys.insert(VoxelKey{x, 0, 0});
  VoxelSet small;
  small.voxel_size = 0.05;
  small.keys.insert(VoxelKey{0, 0, 0});
  for (std::int64_t x = 0; x < 9; ++x) small.keys.insert(VoxelKey{1000 + x, 0, 0});

  CHECK(voxel_iou(large, small) == 1.0 / 209.0);
  CHECK(voxel_containment(small, large) == 0.1);
  CHECK(voxel_containment(large, small) == 1.0 / 200.0);

  CHECK(overlap(large, small, 0.01, 0.10));        // incoming small fragment joins
  CHECK_FALSE(overlap(small, large, 0.01, 0.10));  // reversed roles do not
}

TEST_CASE("overlap thresholds are inclusive") {
  const VoxelSet a = set_of({{0, 0, 0}, {1, 0, 0}});
  const VoxelSet b = set_of({{1, 0, 0}, {2, 0, 0}});
  // IoU is exactly 1/3; containment exactly 1/2.
  CHECK(overlap(a, b, 1.0 / 3.0, 1.0));
  CHECK_FALSE(overlap(a, b, 0.34, 1.0));
  CHECK(overlap(a, b, 1.0, 0.5));
  CHECK_FALSE(overlap(a, b, 1.0, 0.51));
}

TEST_CASE("predicates agree bitwise with a sorted-list oracle") {
  Rng rng(40917);
  const std::array<double, 3> sizes{0.01, 0.05, 0.10};
  for (int trial = 0; trial < 60; ++trial) {
    const double voxel_size = sizes[trial % sizes.size()];
    std::vector<Point3> points_a, points_b;
    const int n_a = rng.uniform_int(1, 500);
    const int n_b = rng.uniform_int(1, 500);
    for (int i = 0; i < n_a; ++i)
      points_a.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                            rng.uniform(-1.0, 1.0));
    for (int i = 0; i < n_b; ++i)
      points_b.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                            rng.uniform(-1.0, 1.0));

    const VoxelSet a = voxelize(points_a, voxel_size);
    const VoxelSet b = voxelize(points_b, voxel_size);
    const OracleCounts counts = oracle_counts(points_a, points_b, voxel_size);

    CHECK(a.size() == counts.a);
    CHECK(b.size() == counts.b);

    const double expected_iou =
        (counts.a + counts.b - counts.both) == 0
            ? 0.0
            : static_cast<double>(counts.both) /
                  static_cast<double>(counts.a + counts.b - counts.both);
    CHECK(voxel_iou(a, b) == expected_iou);
    CHECK(voxel_containment(b, a) ==
          static_cast<double>(counts.both) / static_cast<double>(counts.b));
  }
}

TEST_CASE("merge unions keys") {
  VoxelSet a = set_of({{0, 0, 0}, {1, 0, 0}});
  const VoxelSet b = set_of({{1, 0, 0}, {2, 0, 0}});
  a.merge(b);
  CHECK(a.size() == 3);

  VoxelSet fresh;  // unset resolution adopts nothing; merge still guards
  fresh.voxel_size = b.voxel_size;
  fresh.merge(b);
  CHECK(fresh.size() == 2);
}

}  // TEST_SUITE
