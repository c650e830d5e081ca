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

#include <Eigen/Geometry>

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

#include "ovlift/geometry.hpp"
#include "ovlift/rng.hpp"
#include "ovlift/vocabulary.hpp"

namespace ovlift::test {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ovlift_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) + "_" +
             std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline Category cat(std::string_view raw) { return *Category::canonicalize(raw); }

// Uniformly random rotation from a random unit axis and angle.
inline Eigen::Matrix3d random_rotation(Rng& rng) {
  Eigen::Vector3d axis;
  do {
    axis = Eigen::Vector3d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                           rng.uniform(-1.0, 1.0));
  } while (axis.norm() < 1e-3);
  axis.normalize();
  return Eigen::AngleAxisd(rng.uniform(0.0, 2.0 * M_PI), axis).toRotationMatrix();
}

inline CameraPose random_pose(Rng& rng, double translation_span = 3.0) {
  CameraPose pose;
  pose.rotation = random_rotation(rng);
  pose.translation = Eigen::Vector3d(rng.uniform(-translation_span, translation_span),
                                     rng.uniform(-translation_span, translation_span),
                                     rng.uniform(-translation_span, translation_span));
  return pose;
}

inline CameraIntrinsics simple_intrinsics(int width = 64, int height = 64) {
  CameraIntrinsics k;
  k.fx = 80.0;
  k.fy = 76.0;
  k.cx = width / 2.0;
  k.cy = height / 2.0;
  k.width = width;
  k.height = height;
  return k;
}

}  // namespace ovlift::test
