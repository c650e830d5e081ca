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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <vector>

#include "ovlift/error.hpp"

namespace ovlift {

using Point3 = Eigen::Vector3d;

// Pinhole intrinsics. Pixel (u, v) is column u, row v; (0, 0) is the first
// pixel of the first row.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  // Throws ConfigError on non-positive focal lengths or dimensions, or a
  // principal point outside the image.
  void validate() const;
};

// World-to-camera rigid transform: x_cam = R * x_world + t.
struct CameraPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  // Camera center in world coordinates: -R^T t.
  Point3 center() const { return -rotation.transpose() * translation; }

  // Throws ValidationError unless R is a rotation (orthonormal, det +1)
  // within 1e-6.
  void validate() const;
};

// Row-major depth image in meters along the camera z axis. Non-positive or
// non-finite values mark invalid pixels.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  static bool is_valid_depth(float d) { return std::isfinite(d) && d > 0.0f; }

  float at(int u, int v) const { return values[static_cast<std::size_t>(v) * width + u]; }
  bool valid_at(int u, int v) const { return is_valid_depth(at(u, v)); }
};

// Scaled rigid transform p' = s * R * p + t.
struct SimilarityTransform {
  double scale = 1.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Point3 apply(const Point3& p) const { return scale * (rotation * p) + translation; }
};

// Axis-aligned box. Degenerate boxes (min == max along an axis) are legal and
// have zero volume.
struct Aabb {
  Point3 min = Point3::Zero();
  Point3 max = Point3::Zero();

  double volume() const;
  bool contains(const Point3& p) const;  // inclusive on all faces
  static Aabb of_points(const std::vector<Point3>& points);  // throws ValidationError if empty
};

// Pixel + depth observation produced by project().
struct PixelObservation {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

// Lifts pixel (u, v) with depth d to world coordinates:
//   p = R^T (d * K^{-1} [u, v, 1]^T - t).
// Returns nullopt when d is non-positive or non-finite; throws ConfigError on
// degenerate intrinsics.
std::optional<Point3> back_project(double u, double v, double depth,
                                   const CameraIntrinsics& intrinsics,
                                   const CameraPose& pose);

// Inverse of back_project: world point to (u, v, camera-frame z).
PixelObservation project(const Point3& point, const CameraIntrinsics& intrinsics,
                         const CameraPose& pose);

// Robust depth filter over one mask region. Removes non-finite and
// non-positive entries, then keeps d with |d - median| <= 3 * 1.4826 * MAD.
// If MAD is zero the tolerance degenerates to 1e-6 around the median.
// Returns the kept indices into `depths`, ascending.
std::vector<std::size_t> filter_depth_outliers(const std::vector<double>& depths);

// Lifts every masked pixel with a valid depth, applies the outlier filter to
// the collected depths, and back-projects the survivors. `mask` is row-major
// height x width with nonzero marking membership; its dimensions must match
// the depth map and intrinsics (ValidationError otherwise).
std::vector<Point3> lift_mask(const std::vector<std::uint8_t>& mask, int mask_height,
                              int mask_width, const DepthMap& depth,
                              const CameraIntrinsics& intrinsics, const CameraPose& pose);

// Registers a reconstruction-scaled camera track against a metric reference.
// The scale is the median ratio ref/pred over pixels valid in both depth
// maps; the rigid part maps the predicted first camera exactly onto the
// reference first camera. Throws ValidationError if the maps disagree in
// shape or share no valid pixel.
SimilarityTransform align_to_reference(const CameraPose& pred_pose0,
                                       const CameraPose& ref_pose0,
                                       const DepthMap& pred_depth0,
                                       const DepthMap& ref_depth0);

// Applies a similarity transform to a point set.
std::vector<Point3> apply_transform(const std::vector<Point3>& points,
                                    const SimilarityTransform& transform);

// Conjugates a world-to-camera pose by a world similarity transform so that
// lifting with the new pose (and depths scaled by transform.scale) equals
// lifting with the old pose and transforming the points.
CameraPose apply_transform(const CameraPose& pose, const SimilarityTransform& transform);

}  // namespace ovlift
