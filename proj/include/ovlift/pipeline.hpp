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

#include <string>
#include <vector>

#include "ovlift/evidence.hpp"
#include "ovlift/merging.hpp"
#include "ovlift/scene_io.hpp"

namespace ovlift {

struct PipelineConfig {
  double voxel_size = 0.05;
  double tau_iou = 0.01;
  double tau_cont = 0.10;
  double tau_support = 3.0;
  int max_names_per_view = 5;   // proposal names kept per view
  int frame_budget = 128;       // uniform frame sampling cap
  int min_fragment_points = 5;  // fragments below this are dropped

  enum class PoseMode { kGiven, kEstimated };
  PoseMode pose_mode = PoseMode::kGiven;

  enum class GroupingMode { kCompatGroups, kSameCategory, kNone };
  GroupingMode grouping = GroupingMode::kCompatGroups;

  void validate() const;
};

struct PipelineResult {
  SceneVocabulary vocabulary;
  CompatibilityGroups groups;
  std::vector<std::string> warnings;  // grouping-response lines that were skipped
  FragmentMemory memory;
  std::vector<Cluster> clusters;
  std::vector<Instance> instances;  // cluster creation order
};

// Runs vocabulary aggregation, optional metric alignment, fragment lifting,
// merging, and evidence accumulation over an in-memory scene.
PipelineResult run_pipeline(const SceneBundle& bundle, const PipelineConfig& config);

}  // namespace ovlift
