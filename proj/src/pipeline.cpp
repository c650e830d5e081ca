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

#include "ovlift/pipeline.hpp"

#include <cmath>

namespace ovlift {

void PipelineConfig::validate() const {
  const auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size))
    throw ConfigError("voxel_size must be positive and finite");
  if (!in_unit(tau_iou) || !in_unit(tau_cont))
    throw ConfigError("overlap thresholds must lie in [0, 1]");
  if (!(tau_support > 0.0) || !std::isfinite(tau_support))
    throw ConfigError("tau_support must be positive and finite");
  if (max_names_per_view < 1) throw ConfigError("max_names_per_view must be positive");
  if (frame_budget < 1) throw ConfigError("frame_budget must be positive");
  if (min_fragment_points < 1) throw ConfigError("min_fragment_points must be positive");
}

PipelineResult run_pipeline(const SceneBundle& bundle, const PipelineConfig& config) {
  config.validate();

  PipelineResult result;

  // Scene vocabulary from the per-view proposal lines.
  std::vector<std::vector<Category>> per_view;
  per_view.reserve(bundle.frames.size());
  for (const FrameData& frame : bundle.frames)
    per_view.push_back(parse_vocab_response(frame.vocab_line, config.max_names_per_view));
  result.vocabulary = aggregate_vocabulary(per_view);

  // Label-compatibility policy.
  switch (config.grouping) {
    case PipelineConfig::GroupingMode::kCompatGroups:
      if (bundle.grouping_text) {
        GroupParseResult parsed = parse_group_spec(*bundle.grouping_text, result.vocabulary);
        result.groups = std::move(parsed.groups);
        result.warnings = std::move(parsed.warnings);
      } else {
        // No grouping response recorded: strict per-category behavior.
        result.groups = CompatibilityGroups::singletons(result.vocabulary);
      }
      break;
    case PipelineConfig::GroupingMode::kSameCategory:
      result.groups = CompatibilityGroups::singletons(result.vocabulary);
      break;
    case PipelineConfig::GroupingMode::kNone:
      result.groups = CompatibilityGroups::universal(result.vocabulary);
      break;
  }

  // In estimated mode the stored camera track lives in a reconstruction
  // frame; register it against the metric reference before lifting.
  std::vector<FrameData> aligned;
  const std::vector<FrameData>* frames = &bundle.frames;
  if (config.pose_mode == PipelineConfig::PoseMode::kEstimated) {
    if (!bundle.ref_pose || !bundle.ref_depth)
      throw ValidationError("estimated pose mode needs ref_pose.txt and ref_depth.gd1");
    if (bundle.frames.empty() || bundle.frames.front().frame_id != 0)
      throw ValidationError("estimated pose mode needs frame 0 in the sample");

    const SimilarityTransform to_metric =
        align_to_reference(bundle.frames.front().pose, *bundle.ref_pose,
                           bundle.frames.front().depth, *bundle.ref_depth);
    aligned = bundle.frames;
    for (FrameData& frame : aligned) {
      frame.pose = apply_transform(frame.pose, to_metric);
      for (float& value : frame.depth.values)
        if (DepthMap::is_valid_depth(value))
          value = static_cast<float>(static_cast<double>(value) * to_metric.scale);
    }
    frames = &aligned;
  }

  std::vector<FrameInputs> inputs;
  inputs.reserve(frames->size());
  for (const FrameData& frame : *frames)
    inputs.push_back(FrameInputs{frame.frame_id, &frame.intrinsics, &frame.pose,
                                 &frame.depth, &frame.masks, &frame.presence});
  result.memory = build_fragment_memory(inputs, result.vocabulary, config.voxel_size,
                                        config.min_fragment_points);

  MergeParams merge_params;
  merge_params.tau_iou = config.tau_iou;
  merge_params.tau_cont = config.tau_cont;
  result.clusters = merge_fragments(result.memory, result.groups, merge_params);

  EvidenceParams evidence_params;
  evidence_params.tau_support = config.tau_support;
  result.instances = finalize_instances(result.clusters, result.memory, evidence_params);
  return result;
}

}  // namespace ovlift
