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

#include <cmath>

#include "ovlift/evidence.hpp"
#include "test_util.hpp"

using namespace ovlift;
using test::cat;

namespace {

Fragment point_fragment(const char* name, std::vector<Point3> points, double confidence) {
  Fragment fragment;
  fragment.category = cat(name);
  fragment.confidence = confidence;
  fragment.points = std::move(points);
  fragment.voxels = voxelize(fragment.points, 0.05);
  fragment.extent = Aabb::of_points(fragment.points).volume();
  return fragment;
}

}  // namespace

TEST_SUITE("evidence") {

TEST_CASE("support weight: anchors and monotonicity") {
  CHECK(support_weight(0.0, 3.0) == 0.0);  // exactly, not approximately
  CHECK(std::abs(support_weight(3.0, 3.0) - (1.0 - std::exp(-1.0))) <= 1e-12);
  CHECK(std::abs(support_weight(2.0, 2.0) - 0.6321205588285577) <= 1e-15);

  double previous = -1.0;
  for (int x = 0; x <= 100; ++x) {
    const double w = support_weight(static_cast<double>(x), 3.0);
    CHECK(w > previous);
    CHECK(w < 1.0);
    previous = w;
  }

  CHECK_THROWS_AS((void)support_weight(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS((void)support_weight(1.0, -2.0), ConfigError);
  CHECK_THROWS_AS((void)support_weight(-1.0, 3.0), ValidationError);
}

TEST_CASE("label scores: mean confidence scaled by saturating support") {
  Cluster cluster;
  cluster.labels[cat("chair")] = Cluster::LabelEvidence{{0.8, 0.6}, 0};
  cluster.labels[cat("sofa")] = Cluster::LabelEvidence{{0.9}, 1};

  EvidenceParams params;
  params.tau_support = 2.0;
  const auto scores = score_labels(cluster, params);

  REQUIRE(scores.size() == 2);
  const LabelScore& chair = scores.at(cat("chair"));
  CHECK(chair.mean_confidence == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(chair.support == 2);
  CHECK(chair.score == doctest::Approx(0.4424843911799904).epsilon(1e-12));

  const LabelScore& sofa = scores.at(cat("sofa"));
  CHECK(sofa.support == 1);
  CHECK(sofa.score == doctest::Approx(0.35412240625862994).epsilon(1e-12));
}

TEST_CASE("more agreeing views never lower a label's score") {
  EvidenceParams params;
  Cluster cluster;
  double previous = -1.0;
  for (int votes = 1; votes <= 12; ++votes) {
    cluster.labels.clear();
    cluster.labels[cat("chair")] =
        Cluster::LabelEvidence{std::vector<double>(votes, 0.8), 0};
    const double score = score_labels(cluster, params).at(cat("chair")).score;
    CHECK(score > previous);
    previous = score;
  }
}

TEST_CASE("winner selection: argmax score, ties to the earlier fragment") {
  FragmentMemory memory;
  memory.fragments.push_back(point_fragment("zebra print chair", {{0.0, 0.0, 0.0}}, 0.8));
  memory.fragments.push_back(point_fragment("armchair", {{1.0, 1.0, 1.0}}, 0.8));

  Cluster cluster;
  cluster.members = {0, 1};
  cluster.labels[cat("zebra print chair")] = Cluster::LabelEvidence{{0.8}, 0};
  cluster.labels[cat("armchair")] = Cluster::LabelEvidence{{0.8}, 1};

  const Instance instance = finalize_instance(cluster, memory, EvidenceParams{});
  // Identical scores; "armchair" sorts first alphabetically but loses the
  // tie because its first supporting fragment arrived later.
  CHECK(instance.label.str() == "zebra print chair");
}

TEST_CASE("finalized box and points span every member fragment") {
  FragmentMemory memory;
  memory.fragments.push_back(
      point_fragment("chair", {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}, 0.8));
  memory.fragments.push_back(point_fragment("chair", {{2.0, 2.0, 2.0}}, 0.6));
  memory.fragments.push_back(point_fragment("sofa", {{-1.0, -1.0, -1.0}}, 0.9));

  Cluster cluster;
  cluster.members = {0, 1, 2};
  cluster.labels[cat("chair")] = Cluster::LabelEvidence{{0.8, 0.6}, 0};
  cluster.labels[cat("sofa")] = Cluster::LabelEvidence{{0.9}, 2};

  EvidenceParams params;
  params.tau_support = 2.0;
  const Instance instance = finalize_instance(cluster, memory, params);

  CHECK(instance.label.str() == "chair");  // 0.4425 beats 0.3541
  CHECK(instance.support == 2);
  CHECK(instance.points.size() == 4);
  // The losing label's fragment still shapes the geometry.
  CHECK(instance.box.min.isApprox(Point3(-1.0, -1.0, -1.0)));
  CHECK(instance.box.max.isApprox(Point3(2.0, 2.0, 2.0)));
}

TEST_CASE("empty clusters and bad parameters are rejected") {
  CHECK_THROWS_AS((void)finalize_instance(Cluster{}, FragmentMemory{}, EvidenceParams{}),
                  ValidationError);
  EvidenceParams params;
  params.tau_support = 0.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
}

TEST_CASE("finalize_instances preserves cluster order") {
  FragmentMemory memory;
  memory.fragments.push_back(point_fragment("chair", {{0.0, 0.0, 0.0}}, 0.5));
  memory.fragments.push_back(point_fragment("sofa", {{5.0, 5.0, 5.0}}, 0.5));

  Cluster first;
  first.members = {0};
  first.labels[cat("chair")] = Cluster::LabelEvidence{{0.5}, 0};
  Cluster second;
  second.members = {1};
  second.labels[cat("sofa")] = Cluster::LabelEvidence{{0.5}, 1};

  const auto instances = finalize_instances({first, second}, memory, EvidenceParams{});
  REQUIRE(instances.size() == 2);
  CHECK(instances[0].label.str() == "chair");
  CHECK(instances[1].label.str() == "sofa");
}

}  // TEST_SUITE
