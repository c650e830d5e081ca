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

#include "ovlift/evidence.hpp"

#include <cmath>
#include <numeric>

namespace ovlift {

void EvidenceParams::validate() const {
  if (!(tau_support > 0.0) || !std::isfinite(tau_support))
    throw ConfigError("tau_support must be positive and finite");
}

double support_weight(double x, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw ConfigError("support_weight: tau must be positive and finite");
  if (!(x >= 0.0))
    throw ValidationError("support_weight: support count must be non-negative");
  return 1.0 - std::exp(-x / tau);
}

std::map<Category, LabelScore> score_labels(const Cluster& cluster,
                                            const EvidenceParams& params) {
  params.validate();
  std::map<Category, LabelScore> scores;
  for (const auto& [category, evidence] : cluster.labels) {
    LabelScore entry;
    entry.support = static_cast<int>(evidence.confidences.size());
    entry.mean_confidence =
        std::accumulate(evidence.confidences.begin(), evidence.confidences.end(), 0.0) /
        static_cast<double>(evidence.confidences.size());
    entry.score = entry.mean_confidence * support_weight(entry.support, params.tau_support);
    entry.first_member = evidence.first_member;
    scores.emplace(category, entry);
  }
  return scores;
}

Instance finalize_instance(const Cluster& cluster, const FragmentMemory& memory,
                           const EvidenceParams& params) {
  if (cluster.members.empty())
    throw ValidationError("finalize_instance: empty cluster");

  const auto scores = score_labels(cluster, params);
  const Category* best = nullptr;
  const LabelScore* best_score = nullptr;
  for (const auto& [category, entry] : scores) {
    const bool wins = !best || entry.score > best_score->score ||
                      (entry.score == best_score->score &&
                       entry.first_member < best_score->first_member);
    if (wins) {
      best = &category;
      best_score = &entry;
    }
  }

  Instance instance;
  instance.label = *best;
  instance.score = best_score->score;
  instance.support = best_score->support;
  for (std::size_t index : cluster.members) {
    const auto& points = memory[index].points;
    instance.points.insert(instance.points.end(), points.begin(), points.end());
  }
  instance.box = Aabb::of_points(instance.points);
  return instance;
}

std::vector<Instance> finalize_instances(const std::vector<Cluster>& clusters,
                                         const FragmentMemory& memory,
                                         const EvidenceParams& params) {
  std::vector<Instance> instances;
  instances.reserve(clusters.size());
  for (const Cluster& cluster : clusters)
    instances.push_back(finalize_instance(cluster, memory, params));
  return instances;
}

}  // namespace ovlift
