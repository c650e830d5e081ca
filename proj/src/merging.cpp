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

#include "ovlift/merging.hpp"

#include <algorithm>
#include <numeric>

namespace ovlift {

void MergeParams::validate() const {
  const auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_unit(tau_iou) || !in_unit(tau_cont))
    throw ConfigError("merge thresholds must lie in [0, 1]");
}

void Cluster::absorb(std::size_t fragment_index, const Fragment& fragment) {
  members.push_back(fragment_index);
  if (voxels.keys.empty() && voxels.voxel_size == 0.0)
    voxels.voxel_size = fragment.voxels.voxel_size;
  voxels.merge(fragment.voxels);
  const auto [it, inserted] =
      labels.try_emplace(fragment.category, LabelEvidence{{}, fragment_index});
  if (!inserted)
    it->second.first_member = std::min(it->second.first_member, fragment_index);
  it->second.confidences.push_back(fragment.confidence);
}

std::vector<std::size_t> sort_fragments(const FragmentMemory& memory) {
  std::vector<std::size_t> order(memory.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Fragment& fa = memory[a];
    const Fragment& fb = memory[b];
    if (fa.extent != fb.extent) return fa.extent > fb.extent;
    if (fa.confidence != fb.confidence) return fa.confidence > fb.confidence;
    return a < b;
  });
  return order;
}

std::vector<Cluster> merge_fragments(const FragmentMemory& memory,
                                     const CompatibilityGroups& groups,
                                     const MergeParams& params) {
  params.validate();

  std::vector<Cluster> clusters;
  for (std::size_t index : sort_fragments(memory)) {
    const Fragment& fragment = memory[index];
    const GroupId group = groups.group_of(fragment.category);

    Cluster* host = nullptr;
    for (Cluster& cluster : clusters) {
      if (cluster.group != group) continue;
      if (!overlap(cluster.voxels, fragment.voxels, params.tau_iou, params.tau_cont))
        continue;
      host = &cluster;
      break;  // earliest qualifying cluster wins
    }
    if (!host) {
      clusters.emplace_back();
      host = &clusters.back();
      host->group = group;
    }
    host->absorb(index, fragment);
  }
  return clusters;
}

}  // namespace ovlift
