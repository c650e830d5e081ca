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

#include <optional>
#include <string>
#include <vector>

#include "ovlift/evidence.hpp"
#include "ovlift/geometry.hpp"
#include "ovlift/vocabulary.hpp"

namespace ovlift {

// A labeled, scored box as read from or written to a detection file.
struct Detection {
  Category label;
  double score = 0.0;
  Aabb box;
};

struct GroundTruthBox {
  Category label;
  Aabb box;
};

// Labeled scene vertices carrying ground-truth instance ids.
struct GroundTruthVertexSet {
  struct Vertex {
    Point3 position = Point3::Zero();
    int instance_id = 0;
    Category label;
  };

  std::vector<Vertex> vertices;

  // Throws ValidationError on negative ids or an id labeled inconsistently.
  void validate() const;
};

// Axis-aligned volumetric IoU. Boxes with zero volume have IoU 0 with
// everything, including themselves.
double box_iou_3d(const Aabb& a, const Aabb& b);

// All-point interpolated average precision for one class. Predictions are
// ranked by descending score (ties keep input order); each in turn greedily
// matches the unmatched ground-truth box of highest IoU, counting a true
// positive iff that IoU >= iou_threshold (IoU ties pick the lowest index).
// Returns nullopt when ground truth is empty (the class is undefined).
std::optional<double> average_precision(const std::vector<Detection>& predictions,
                                        const std::vector<Aabb>& ground_truth,
                                        double iou_threshold);

// Mean AP over the classes present in the ground truth (classes without
// ground truth are excluded rather than scored zero). Throws ValidationError
// when the ground truth is empty.
double mean_ap(const std::vector<Detection>& predictions,
               const std::vector<GroundTruthBox>& ground_truth, double iou_threshold);

struct ClassAp {
  Category label;
  int gt_count = 0;
  std::vector<double> ap;  // parallel to the threshold list
};

struct DetectionEval {
  std::vector<double> thresholds;
  std::vector<ClassAp> per_class;  // classes in ground-truth first-appearance order
  std::vector<double> map;         // parallel to thresholds
};

DetectionEval evaluate_detections(const std::vector<Detection>& predictions,
                                  const std::vector<GroundTruthBox>& ground_truth,
                                  const std::vector<double>& thresholds);

struct TransferParams {
  double radius = 0.05;     // strict upper bound on vertex-to-point distance
  bool require_box = true;  // vertex must also fall inside the instance box

  void validate() const;
};

// Assigns each ground-truth vertex to the instance owning the globally
// nearest predicted point, provided the distance is strictly below radius
// and, when require_box is set, the vertex lies inside that instance's box.
// Returns one instance index (or -1) per vertex.
std::vector<int> transfer_instance_labels(const std::vector<Instance>& instances,
                                          const GroundTruthVertexSet& vertices,
                                          const TransferParams& params);

struct SegmentationEval {
  std::vector<double> thresholds;
  std::vector<ClassAp> per_class;
  std::vector<double> map;
  std::vector<int> assignment;  // per-vertex instance index or -1
};

// Detection-style AP where a prediction's region is the set of vertices
// transferred to it and overlap is vertex-set IoU against each ground-truth
// instance's vertex set.
SegmentationEval evaluate_instance_segmentation(const std::vector<Instance>& instances,
                                                const GroundTruthVertexSet& vertices,
                                                const TransferParams& params,
                                                const std::vector<double>& thresholds);

// Human-readable table plus trailing machine-readable "<metric> <value>"
// lines (spaces in class names become underscores inside metric names).
std::string format_report(const DetectionEval& detection, const SegmentationEval* segmentation);

}  // namespace ovlift
