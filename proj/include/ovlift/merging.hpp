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

#include "ovlift/fragments.hpp"
#include "ovlift/vocabulary.hpp"
#include "ovlift/voxel_grid.hpp"

namespace ovlift {

struct MergeParams {
  double tau_iou = 0.01;
  double tau_cont = 0.10;

  void validate() const;  // thresholds must lie in [0, 1]
};

// A growing object hypothesis: member fragments, their union footprint, and
// per-category confidence evidence.
struct Cluster {
  struct LabelEvidence {
    std::vector<double> confidences;  // one entry per supporting fragment
    std::size_t first_member = 0;     // lowest memory index voting for this label
  };

  std::vector<std::size_t> members;  // fragment indices in merge order
  VoxelSet voxels;                   // union of member footprints
  std::map<Category, LabelEvidence> labels;
  GroupId group = -1;

  void absorb(std::size_t fragment_index, const Fragment& fragment);
};

// Processing order: extent descending, then confidence descending, then
// memory index ascending.
std::vector<std::size_t> sort_fragments(const FragmentMemory& memory);

// Single greedy pass. Each fragment (largest first) joins the earliest
// created cluster that shares its compatibility group and passes the spatial
// overlap gate, else founds a new cluster. Clusters are returned in creation
// order and are never merged with each other.
std::vector<Cluster> merge_fragments(const FragmentMemory& memory,
                                     const CompatibilityGroups& groups,
                                     const MergeParams& params);

}  // namespace ovlift
