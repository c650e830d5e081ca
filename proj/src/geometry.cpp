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

#include "ovlift/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ovlift {
namespace {

constexpr double kMadScale = 1.4826;  // consistency factor for a normal core
constexpr double kMadCutoff = 3.0;
constexpr double kZeroMadTolerance = 1e-6;
constexpr double kRotationTolerance = 1e-6;

// Median with the standard convention: middle element for odd counts, mean of
// the two middle elements for even counts. `values` is consumed.
double median_inplace(std::vector<double>& values) {
  const std::size_t n = values.size();
  const std::size_t m = n / 2;
  std::nth_element(values.begin(), values.begin() + m, values.end());
  const double upper = values[m];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + m);
  return 0.5 * (lower + upper);
}

}  // namespace

void CameraIntrinsics::validate() const {
  if (width <= 0 || height <= 0)
    throw ConfigError("intrinsics: image dimensions must be positive");
  if (!(fx > 0.0) || !(fy > 0.0))
    throw ConfigError("intrinsics: focal lengths must be positive");
  if (!(cx >= 0.0) || cx >= width || !(cy >= 0.0) || cy >= height)
    throw ConfigError("intrinsics: principal point outside image");
}

void CameraPose::validate() const {
  const Eigen::Matrix3d residual =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (residual.cwiseAbs().maxCoeff() > kRotationTolerance)
    throw ValidationError("pose: rotation is not orthonormal");
  if (std::abs(rotation.determinant() - 1.0) > kRotationTolerance)
    throw ValidationError("pose: rotation determinant is not +1");
}

double Aabb::volume() const {
  const Point3 extent = (max - min).cwiseMax(0.0);
  return extent.x() * extent.y() * extent.z();
}

bool Aabb::contains(const Point3& p) const {
  return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
         p.y() <= max.y() && p.z() >= min.z() && p.z() <= max.z();
}

Aabb Aabb::of_points(const std::vector<Point3>& points) {
  if (points.empty()) throw ValidationError("aabb: empty point set");
  Aabb box{points.front(), points.front()};
  for (const Point3& p : points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

std::optional<Point3> back_project(double u, double v, double depth,
                                   const CameraIntrinsics& intrinsics,
                                   const CameraPose& pose) {
  intrinsics.validate();
  if (!std::isfinite(depth) || depth <= 0.0) return std::nullopt;
  const Point3 ray((u - intrinsics.cx) / intrinsics.fx,
                   (v - intrinsics.cy) / intrinsics.fy, 1.0);
  return pose.rotation.transpose() * (depth * ray - pose.translation);
}

PixelObservation project(const Point3& point, const CameraIntrinsics& intrinsics,
                         const CameraPose& pose) {
  intrinsics.validate();
  const Point3 cam = pose.rotation * point + pose.translation;
  return PixelObservation{intrinsics.fx * cam.x() / cam.z() + intrinsics.cx,
                          intrinsics.fy * cam.y() / cam.z() + intrinsics.cy,
                          cam.z()};
}

std::vector<std::size_t> filter_depth_outliers(const std::vector<double>& depths) {
  std::vector<std::size_t> valid;
  valid.reserve(depths.size());
  for (std::size_t i = 0; i < depths.size(); ++i)
    if (std::isfinite(depths[i]) && depths[i] > 0.0) valid.push_back(i);
  if (valid.empty()) return {};

  std::vector<double> scratch;
  scratch.reserve(valid.size());
  for (std::size_t i : valid) scratch.push_back(depths[i]);
  const double med = median_inplace(scratch);

  scratch.clear();
  for (std::size_t i : valid) scratch.push_back(std::abs(depths[i] - med));
  const double mad = median_inplace(scratch);

  const double tolerance = mad > 0.0 ? kMadCutoff * kMadScale * mad : kZeroMadTolerance;
  std::vector<std::size_t> kept;
  kept.reserve(valid.size());
  for (std::size_t i : valid)
    if (std::abs(depths[i] - med) <= tolerance) kept.push_back(i);
  return kept;
}

std::vector<Point3> lift_mask(const std::vector<std::uint8_t>& mask, int mask_height,
                              int mask_width, const DepthMap& depth,
                              const CameraIntrinsics& intrinsics, const CameraPose& pose) {
  if (mask_height != depth.height || mask_width != depth.width)
    throw ValidationError("lift_mask: mask and depth dimensions differ");
  if (mask_width != intrinsics.width || mask_height != intrinsics.height)
    throw ValidationError("lift_mask: mask and intrinsics dimensions differ");
  if (mask.size() != static_cast<std::size_t>(mask_height) * mask_width)
    throw ValidationError("lift_mask: mask buffer size mismatch");
  intrinsics.validate();

  std::vector<double> depths;
  std::vector<std::pair<int, int>> pixels;
  for (int v = 0; v < mask_height; ++v) {
    for (int u = 0; u < mask_width; ++u) {
      if (!mask[static_cast<std::size_t>(v) * mask_width + u]) continue;
      const float d = depth.at(u, v);
      if (!DepthMap::is_valid_depth(d)) continue;
      depths.push_back(static_cast<double>(d));
      pixels.emplace_back(u, v);
    }
  }

  std::vector<Point3> points;
  for (std::size_t i : filter_depth_outliers(depths)) {
    const auto [u, v] = pixels[i];
    points.push_back(*back_project(u, v, depths[i], intrinsics, pose));
  }
  return points;
}

SimilarityTransform align_to_reference(const CameraPose& pred_pose0,
                                       const CameraPose& ref_pose0,
                                       const DepthMap& pred_depth0,
                                       const DepthMap& ref_depth0) {
  if (pred_depth0.width != ref_depth0.width || pred_depth0.height != ref_depth0.height)
    throw ValidationError("align_to_reference: depth map dimensions differ");

  std::vector<double> ratios;
  for (std::size_t i = 0; i < pred_depth0.values.size(); ++i) {
    const float dp = pred_depth0.values[i];
    const float dr = ref_depth0.values[i];
    if (DepthMap::is_valid_depth(dp) && DepthMap::is_valid_depth(dr))
      ratios.push_back(static_cast<double>(dr) / static_cast<double>(dp));
  }
  if (ratios.empty())
    throw ValidationError("align_to_reference: no jointly valid depth pixel");

  SimilarityTransform transform;
  transform.scale = median_inplace(ratios);
  transform.rotation = ref_pose0.rotation.transpose() * pred_pose0.rotation;
  transform.translation =
      ref_pose0.center() - transform.scale * (transform.rotation * pred_pose0.center());
  return transform;
}

std::vector<Point3> apply_transform(const std::vector<Point3>& points,
                                    const SimilarityTransform& transform) {
  std::vector<Point3> out;
  out.reserve(points.size());
  for (const Point3& p : points) out.push_back(transform.apply(p));
  return out;
}

CameraPose apply_transform(const CameraPose& pose, const SimilarityTransform& transform) {
  // With S(p) = s R_s p + t_s and x_cam = R x + t, the camera observing the
  // transformed world satisfies x_cam' = R R_s^T x' + (s t - R R_s^T t_s)
  // for depths scaled by s.
  CameraPose out;
  out.rotation = pose.rotation * transform.rotation.transpose();
  out.translation = transform.scale * pose.translation - out.rotation * transform.translation;
  return out;
}

}  // namespace ovlift
