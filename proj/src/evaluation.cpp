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

#include "ovlift/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace ovlift {
namespace {

// Ranks prediction indices by descending score; ties keep input order.
std::vector<std::size_t> rank_by_score(const std::vector<Detection>& predictions) {
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return predictions[a].score > predictions[b].score;
  });
  return order;
}

// Greedy matching + all-point interpolated AP. ious[r][g] is the overlap of
// the rank-r prediction against ground truth g.
double ap_from_ranked_ious(const std::vector<std::vector<double>>& ious,
                           std::size_t gt_count, double threshold) {
  std::vector<bool> matched(gt_count, false);
  std::vector<bool> is_tp;
  is_tp.reserve(ious.size());
  for (const auto& row : ious) {
    std::size_t best_gt = gt_count;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gt_count; ++g) {
      if (matched[g]) continue;
      if (row[g] > best_iou) {  // strict: IoU ties keep the lowest index
        best_iou = row[g];
        best_gt = g;
      }
    }
    const bool tp = best_gt < gt_count && best_iou >= threshold;
    if (tp) matched[best_gt] = true;
    is_tp.push_back(tp);
  }

  // Precision envelope integrated over recall.
  const std::size_t n = is_tp.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp_cum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_tp[i]) ++tp_cum;
    precision[i] = static_cast<double>(tp_cum) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp_cum) / static_cast<double>(gt_count);
  }
  double envelope = 0.0;
  double ap = 0.0;
  double prev_recall = 0.0;
  std::vector<double> interp(n);
  for (std::size_t i = n; i-- > 0;) {
    envelope = std::max(envelope, precision[i]);
    interp[i] = envelope;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * interp[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string metric_suffix(const Category& label) {
  std::string out = label.str();
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

std::string threshold_tag(double threshold) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", threshold);
  return buf;
}

}  // namespace

void GroundTruthVertexSet::validate() const {
  std::unordered_map<int, const Category*> labels;
  for (const Vertex& vertex : vertices) {
    if (vertex.instance_id < 0)
      throw ValidationError("ground-truth vertex with negative instance id");
    const auto [it, inserted] = labels.emplace(vertex.instance_id, &vertex.label);
    if (!inserted && *it->second != vertex.label)
      throw ValidationError("ground-truth instance " + std::to_string(vertex.instance_id) +
                            " carries inconsistent labels");
  }
}

double box_iou_3d(const Aabb& a, const Aabb& b) {
  const Point3 lo = a.min.cwiseMax(b.min);
  const Point3 hi = a.max.cwiseMin(b.max);
  const Point3 extent = (hi - lo).cwiseMax(0.0);
  const double inter = extent.x() * extent.y() * extent.z();
  const double uni = a.volume() + b.volume() - inter;
  if (!(uni > 0.0)) return 0.0;
  return inter / uni;
}

std::optional<double> average_precision(const std::vector<Detection>& predictions,
                                        const std::vector<Aabb>& ground_truth,
                                        double iou_threshold) {
  if (ground_truth.empty()) return std::nullopt;
  std::vector<std::vector<double>> ious;
  ious.reserve(predictions.size());
  for (std::size_t p : rank_by_score(predictions)) {
    std::vector<double> row;
    row.reserve(ground_truth.size());
    for (const Aabb& gt : ground_truth) row.push_back(box_iou_3d(predictions[p].box, gt));
    ious.push_back(std::move(row));
  }
  return ap_from_ranked_ious(ious, ground_truth.size(), iou_threshold);
}

double mean_ap(const std::vector<Detection>& predictions,
               const std::vector<GroundTruthBox>& ground_truth, double iou_threshold) {
  const DetectionEval eval = evaluate_detections(predictions, ground_truth, {iou_threshold});
  return eval.map.front();
}

DetectionEval evaluate_detections(const std::vector<Detection>& predictions,
                                  const std::vector<GroundTruthBox>& ground_truth,
                                  const std::vector<double>& thresholds) {
  if (ground_truth.empty())
    throw ValidationError("evaluate_detections: empty ground truth");
  if (thresholds.empty())
    throw ConfigError("evaluate_detections: no IoU thresholds");

  DetectionEval eval;
  eval.thresholds = thresholds;

  std::vector<Category> classes;
  std::map<Category, std::vector<Aabb>> gt_by_class;
  for (const GroundTruthBox& gt : ground_truth) {
    auto [it, inserted] = gt_by_class.try_emplace(gt.label);
    if (it->second.empty()) classes.push_back(gt.label);
    it->second.push_back(gt.box);
  }

  eval.map.assign(thresholds.size(), 0.0);
  for (const Category& label : classes) {
    ClassAp entry;
    entry.label = label;
    entry.gt_count = static_cast<int>(gt_by_class[label].size());
    std::vector<Detection> class_preds;
    for (const Detection& d : predictions)
      if (d.label == label) class_preds.push_back(d);
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const double ap =
          average_precision(class_preds, gt_by_class[label], thresholds[t]).value();
      entry.ap.push_back(ap);
      eval.map[t] += ap;
    }
    eval.per_class.push_back(std::move(entry));
  }
  for (double& value : eval.map) value /= static_cast<double>(classes.size());
  return eval;
}

void TransferParams::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ConfigError("transfer radius must be positive and finite");
}

std::vector<int> transfer_instance_labels(const std::vector<Instance>& instances,
                                          const GroundTruthVertexSet& vertices,
                                          const TransferParams& params) {
  params.validate();
  vertices.validate();
  const double radius_sq = params.radius * params.radius;

  std::vector<int> assignment(vertices.vertices.size(), -1);
  for (std::size_t v = 0; v < vertices.vertices.size(); ++v) {
    const Point3& position = vertices.vertices[v].position;
    double best_sq = std::numeric_limits<double>::infinity();
    int best_instance = -1;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      for (const Point3& p : instances[i].points) {
        const double d_sq = (p - position).squaredNorm();
        if (d_sq < best_sq) {
          best_sq = d_sq;
          best_instance = static_cast<int>(i);
        }
      }
    }
    if (best_instance < 0 || !(best_sq < radius_sq)) continue;
    if (params.require_box &&
        !instances[static_cast<std::size_t>(best_instance)].box.contains(position))
      continue;
    assignment[v] = best_instance;
  }
  return assignment;
}

SegmentationEval evaluate_instance_segmentation(const std::vector<Instance>& instances,
                                                const GroundTruthVertexSet& vertices,
                                                const TransferParams& params,
                                                const std::vector<double>& thresholds) {
  if (vertices.vertices.empty())
    throw ValidationError("evaluate_instance_segmentation: no ground-truth vertices");
  if (thresholds.empty())
    throw ConfigError("evaluate_instance_segmentation: no IoU thresholds");

  SegmentationEval eval;
  eval.thresholds = thresholds;
  eval.assignment = transfer_instance_labels(instances, vertices, params);

  // Ground-truth instances grouped per class: ids ascending within a class,
  // classes in first-appearance order.
  std::vector<Category> classes;
  std::map<Category, std::map<int, std::size_t>> gt_sizes;
  for (const auto& vertex : vertices.vertices) {
    auto [it, inserted] = gt_sizes.try_emplace(vertex.label);
    if (it->second.empty()) classes.push_back(vertex.label);
    ++it->second[vertex.instance_id];
  }

  // Per predicted instance: total transferred vertices and overlap counts
  // against each ground-truth id.
  std::vector<std::size_t> pred_sizes(instances.size(), 0);
  std::vector<std::unordered_map<int, std::size_t>> pred_overlap(instances.size());
  for (std::size_t v = 0; v < eval.assignment.size(); ++v) {
    const int instance = eval.assignment[v];
    if (instance < 0) continue;
    ++pred_sizes[instance];
    ++pred_overlap[instance][vertices.vertices[v].instance_id];
  }

  eval.map.assign(thresholds.size(), 0.0);
  for (const Category& label : classes) {
    const auto& gt_for_class = gt_sizes[label];
    std::vector<int> gt_ids;
    for (const auto& [id, count] : gt_for_class) gt_ids.push_back(id);

    // Predictions of this class ranked by score (ties keep instance order).
    std::vector<std::size_t> preds;
    for (std::size_t i = 0; i < instances.size(); ++i)
      if (instances[i].label == label) preds.push_back(i);
    std::stable_sort(preds.begin(), preds.end(), [&](std::size_t a, std::size_t b) {
      return instances[a].score > instances[b].score;
    });

    std::vector<std::vector<double>> ious;
    ious.reserve(preds.size());
    for (std::size_t i : preds) {
      std::vector<double> row;
      row.reserve(gt_ids.size());
      for (int id : gt_ids) {
        const auto overlap_it = pred_overlap[i].find(id);
        const double inter =
            overlap_it == pred_overlap[i].end() ? 0.0 : static_cast<double>(overlap_it->second);
        const double uni =
            static_cast<double>(pred_sizes[i]) + static_cast<double>(gt_for_class.at(id)) - inter;
        row.push_back(uni > 0.0 ? inter / uni : 0.0);
      }
      ious.push_back(std::move(row));
    }

    ClassAp entry;
    entry.label = label;
    entry.gt_count = static_cast<int>(gt_ids.size());
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const double ap = ap_from_ranked_ious(ious, gt_ids.size(), thresholds[t]);
      entry.ap.push_back(ap);
      eval.map[t] += ap;
    }
    eval.per_class.push_back(std::move(entry));
  }
  for (double& value : eval.map) value /= static_cast<double>(classes.size());
  return eval;
}

std::string format_report(const DetectionEval& detection, const SegmentationEval* segmentation) {
  std::string out;
  std::size_t width = 5;  // at least "class"
  for (const ClassAp& entry : detection.per_class)
    width = std::max(width, entry.label.str().size());
  if (segmentation)
    for (const ClassAp& entry : segmentation->per_class)
      width = std::max(width, entry.label.str().size());

  const auto pad = [&](const std::string& s) {
    return s + std::string(width - std::min(width, s.size()) + 2, ' ');
  };

  const auto emit_table = [&](const std::string& title,
                              const std::vector<double>& thresholds,
                              const std::vector<ClassAp>& per_class,
                              const std::vector<double>& map) {
    out += title + "\n";
    out += pad("class") + " gt";
    for (double thr : thresholds) out += "  ap@" + threshold_tag(thr) + "  ";
    out += "\n";
    for (const ClassAp& entry : per_class) {
      char gt_buf[16];
      std::snprintf(gt_buf, sizeof(gt_buf), "%3d", entry.gt_count);
      out += pad(entry.label.str()) + gt_buf;
      for (double ap : entry.ap) out += "  " + format_double(ap);
      out += "\n";
    }
    out += pad("mAP") + "   ";
    for (double value : map) out += "  " + format_double(value);
    out += "\n";
  };

  emit_table("detection", detection.thresholds, detection.per_class, detection.map);
  if (segmentation) {
    out += "\n";
    emit_table("instance segmentation", segmentation->thresholds, segmentation->per_class,
               segmentation->map);
  }

  out += "\n";
  for (std::size_t t = 0; t < detection.thresholds.size(); ++t)
    out += "map@" + threshold_tag(detection.thresholds[t]) + " " +
           format_double(detection.map[t]) + "\n";
  for (const ClassAp& entry : detection.per_class)
    for (std::size_t t = 0; t < detection.thresholds.size(); ++t)
      out += "ap@" + threshold_tag(detection.thresholds[t]) + "_" + metric_suffix(entry.label) +
             " " + format_double(entry.ap[t]) + "\n";
  if (segmentation) {
    for (std::size_t t = 0; t < segmentation->thresholds.size(); ++t)
      out += "seg_map@" + threshold_tag(segmentation->thresholds[t]) + " " +
             format_double(segmentation->map[t]) + "\n";
    for (const ClassAp& entry : segmentation->per_class)
      for (std::size_t t = 0; t < segmentation->thresholds.size(); ++t)
        out += "seg_ap@" + threshold_tag(segmentation->thresholds[t]) + "_" +
               metric_suffix(entry.label) + " " + format_double(entry.ap[t]) + "\n";
  }
  return out;
}

}  // namespace ovlift
