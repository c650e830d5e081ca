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
#include <vector>

#include "ovlift/merging.hpp"

namespace ovlift {

struct EvidenceParams {
  double tau_support = 3.0;  // saturation constant of the support weight

  void validate() const;  // tau_support must be positive and finite
};

// Saturating support weight w(x) = 1 - exp(-x / tau): 0 at no support,
// approaching 1 as evidence accumulates. Requires x >= 0.
double support_weight(double x, double tau);

struct LabelScore {
  double mean_confidence = 0.0;
  int support = 0;             // number of fragments voting for the label
  double score = 0.0;          // mean_confidence * support_weight(support)
  std::size_t first_member = 0;
};

// Scores every label seen in the cluster.
std::map<Category, LabelScore> score_labels(const Cluster& cluster,
                                            const EvidenceParams& params);

// A finalized detection: winning label, its score, the bounding box of all
// member points, and the points themselves.
struct Instance {
  Category label;
  double score = 0.0;
  Aabb box;
  int support = 0;  // supporting fragments of the winning label
  std::vector<Point3> points;
};

// Picks the argmax label (ties resolved toward the label whose first
// supporting fragment has the lower memory index) and computes the box over
// all member fragments' points. Throws ValidationError on empty clusters.
Instance finalize_instance(const Cluster& cluster, const FragmentMemory& memory,
                           const EvidenceParams& params);

// Finalizes every cluster, preserving cluster order.
std::vector<Instance> finalize_instances(const std::vector<Cluster>& clusters,
                                         const FragmentMemory& memory,
                                         const EvidenceParams& params);

}  // namespace ovlift
