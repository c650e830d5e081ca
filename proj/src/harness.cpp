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

#include "ovlift/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "ovlift/rng.hpp"

namespace ovlift {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Independent random stream ids.
constexpr std::uint64_t kLabelStream = 1;
constexpr std::uint64_t kJitterStream = 2;
constexpr std::uint64_t kDepthStream = 3;
constexpr std::uint64_t kVertexStreamBase = 100;

std::string frame_name(int frame_id, const char* extension) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "frame_%06d.%s", frame_id, extension);
  return buffer;
}

Point3 objects_centroid(const SceneSpec& spec) {
  Point3 sum = Point3::Zero();
  for (const ObjectSpec& object : spec.objects)
    sum += 0.5 * (object.box.min + object.box.max);
  return sum / static_cast<double>(spec.objects.size());
}

// Entry distance of a ray into a box, or nullopt. The ray direction is the
// unnormalized camera ray, so the parameter equals camera-frame depth.
std::optional<double> ray_box_entry(const Point3& origin, const Point3& direction,
                                    const Aabb& box) {
  double t_near = 0.0;
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double o = origin[axis];
    const double d = direction[axis];
    if (d == 0.0) {
      if (o < box.min[axis] || o > box.max[axis]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[axis] - o) / d;
    double t1 = (box.max[axis] - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (!(t_near > 0.0)) return std::nullopt;  // behind or on the camera
  return t_near;
}

// The swap pool of an object: its label followed by its distinct synonyms.
std::vector<Category> swap_pool(const ObjectSpec& object) {
  std::vector<Category> pool{object.label};
  for (const Category& synonym : object.synonyms)
    if (std::find(pool.begin(), pool.end(), synonym) == pool.end()) pool.push_back(synonym);
  return pool;
}

Aabb parse_box(const json& j, const std::string& context) {
  const auto point = [&](const json& node) {
    if (!node.is_array() || node.size() != 3)
      throw ParseError(context + ": box corner must be [x, y, z]");
    return Point3(node[0].get<double>(), node[1].get<double>(), node[2].get<double>());
  };
  return Aabb{point(j.at("min")), point(j.at("max"))};
}

Category parse_label(const json& node, const std::string& context) {
  const auto label = Category::canonicalize(node.get<std::string>());
  if (!label) throw ParseError(context + ": empty label");
  return *label;
}

}  // namespace

void SceneSpec::validate() const {
  if (objects.empty()) throw ConfigError("scene: needs at least one object");
  if (!(room.volume() > 0.0)) throw ConfigError("scene: room must have positive volume");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const ObjectSpec& object = objects[i];
    const std::string which = "scene object " + std::to_string(i);
    if (object.label.empty()) throw ConfigError(which + ": empty label");
    if (!(object.box.volume() > 0.0))
      throw ConfigError(which + ": box must have positive volume");
    if (!room.contains(object.box.min) || !room.contains(object.box.max))
      throw ConfigError(which + ": box outside room");
  }
  if (cameras.count < 1) throw ConfigError("scene: camera count must be positive");
  if (!(cameras.radius > 0.0)) throw ConfigError("scene: camera radius must be positive");
  if (!(cameras.fov_deg > 10.0) || !(cameras.fov_deg < 170.0))
    throw ConfigError("scene: field of view out of range");
  if (image_width < 8 || image_height < 8)
    throw ConfigError("scene: image dimensions must be at least 8");
  if (max_names_per_frame < 1)
    throw ConfigError("scene: max_names_per_frame must be positive");
  if (vertices_per_object < 1)
    throw ConfigError("scene: vertices_per_object must be positive");
  if (pose_distortion && !(pose_distortion->scale > 0.0))
    throw ConfigError("scene: distortion scale must be positive");
}

void NoiseSpec::validate() const {
  if (!(label_swap_prob >= 0.0) || label_swap_prob > 1.0)
    throw ConfigError("noise: label_swap_prob must lie in [0, 1]");
  if (!(depth_sigma >= 0.0)) throw ConfigError("noise: depth_sigma must be >= 0");
  if (!(confidence_jitter >= 0.0) || confidence_jitter > 1.0)
    throw ConfigError("noise: confidence_jitter must lie in [0, 1]");
}

std::pair<SceneSpec, NoiseSpec> parse_scene_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scene spec: ") + e.what());
  }

  try {
    SceneSpec spec;
    NoiseSpec noise;
    if (j.contains("room")) spec.room = parse_box(j["room"], "room");
    for (std::size_t i = 0; i < j.at("objects").size(); ++i) {
      const json& node = j["objects"][i];
      const std::string context = "object " + std::to_string(i);
      ObjectSpec object;
      object.label = parse_label(node.at("label"), context);
      object.box = parse_box(node.at("box"), context);
      if (node.contains("synonyms"))
        for (const json& synonym : node["synonyms"])
          object.synonyms.push_back(parse_label(synonym, context));
      spec.objects.push_back(std::move(object));
    }
    if (j.contains("cameras")) {
      const json& c = j["cameras"];
      if (c.contains("count")) spec.cameras.count = c["count"].get<int>();
      if (c.contains("radius")) spec.cameras.radius = c["radius"].get<double>();
      if (c.contains("height")) spec.cameras.height = c["height"].get<double>();
      if (c.contains("fov_deg")) spec.cameras.fov_deg = c["fov_deg"].get<double>();
    }
    if (j.contains("image")) {
      spec.image_width = j["image"].at("width").get<int>();
      spec.image_height = j["image"].at("height").get<int>();
    }
    if (j.contains("max_names_per_frame"))
      spec.max_names_per_frame = j["max_names_per_frame"].get<int>();
    if (j.contains("vertices_per_object"))
      spec.vertices_per_object = j["vertices_per_object"].get<int>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("noise")) {
      const json& n = j["noise"];
      if (n.contains("label_swap_prob")) noise.label_swap_prob = n["label_swap_prob"].get<double>();
      if (n.contains("depth_sigma")) noise.depth_sigma = n["depth_sigma"].get<double>();
      if (n.contains("confidence_jitter"))
        noise.confidence_jitter = n["confidence_jitter"].get<double>();
    }
    if (j.contains("pose_distortion")) {
      const json& d = j["pose_distortion"];
      SimilarityTransform transform;
      transform.scale = d.at("scale").get<double>();
      if (d.contains("rotation_deg")) {
        const json& axis_node = d.at("rotation_axis");
        const Eigen::Vector3d axis(axis_node[0].get<double>(), axis_node[1].get<double>(),
                                   axis_node[2].get<double>());
        transform.rotation =
            Eigen::AngleAxisd(d["rotation_deg"].get<double>() * M_PI / 180.0,
                              axis.normalized())
                .toRotationMatrix();
      }
      if (d.contains("translation")) {
        const json& t = d["translation"];
        transform.translation = Eigen::Vector3d(t[0].get<double>(), t[1].get<double>(),
                                                t[2].get<double>());
      }
      spec.pose_distortion = transform;
    }
    spec.validate();
    noise.validate();
    return {std::move(spec), noise};
  } catch (const json::exception& e) {
    throw ParseError(std::string("scene spec: ") + e.what());
  }
}

CameraIntrinsics rig_intrinsics(const SceneSpec& spec) {
  CameraIntrinsics k;
  k.width = spec.image_width;
  k.height = spec.image_height;
  k.fx = 0.5 * spec.image_width / std::tan(0.5 * spec.cameras.fov_deg * M_PI / 180.0);
  k.fy = k.fx;
  k.cx = 0.5 * spec.image_width;
  k.cy = 0.5 * spec.image_height;
  return k;
}

std::vector<CameraPose> rig_poses(const SceneSpec& spec) {
  const Point3 target = objects_centroid(spec);
  std::vector<CameraPose> poses;
  poses.reserve(spec.cameras.count);
  for (int i = 0; i < spec.cameras.count; ++i) {
    const double angle = 2.0 * M_PI * i / spec.cameras.count;
    const Point3 eye(target.x() + spec.cameras.radius * std::cos(angle),
                     target.y() + spec.cameras.radius * std::sin(angle),
                     spec.cameras.height);
    const Point3 forward = (target - eye).normalized();
    const Point3 right = forward.cross(Point3(0.0, 0.0, 1.0)).normalized();
    const Point3 down = forward.cross(right);  // completes the right-handed triad

    CameraPose pose;
    pose.rotation.row(0) = right.transpose();
    pose.rotation.row(1) = down.transpose();
    pose.rotation.row(2) = forward.transpose();
    pose.translation = -pose.rotation * eye;
    poses.push_back(pose);
  }
  return poses;
}

RenderResult render_frame(const SceneSpec& spec, const CameraIntrinsics& intrinsics,
                          const CameraPose& pose) {
  RenderResult result;
  result.depth.width = intrinsics.width;
  result.depth.height = intrinsics.height;
  result.depth.values.assign(
      static_cast<std::size_t>(intrinsics.width) * intrinsics.height, 0.0f);
  result.object_ids.assign(result.depth.values.size(), -1);

  const Point3 origin = pose.center();
  const Eigen::Matrix3d rotation_t = pose.rotation.transpose();
  for (int v = 0; v < intrinsics.height; ++v) {
    for (int u = 0; u < intrinsics.width; ++u) {
      const Point3 ray_cam((u - intrinsics.cx) / intrinsics.fx,
                           (v - intrinsics.cy) / intrinsics.fy, 1.0);
      const Point3 direction = rotation_t * ray_cam;
      double best = std::numeric_limits<double>::infinity();
      int best_object = -1;
      for (std::size_t k = 0; k < spec.objects.size(); ++k) {
        const auto entry = ray_box_entry(origin, direction, spec.objects[k].box);
        if (entry && *entry < best) {
          best = *entry;
          best_object = static_cast<int>(k);
        }
      }
      if (best_object >= 0) {
        const std::size_t index = static_cast<std::size_t>(v) * intrinsics.width + u;
        result.depth.values[index] = static_cast<float>(best);
        result.object_ids[index] = best_object;
      }
    }
  }
  return result;
}

std::vector<std::vector<int>> visibility_pixel_counts(const SceneSpec& spec) {
  spec.validate();
  const CameraIntrinsics intrinsics = rig_intrinsics(spec);
  std::vector<std::vector<int>> counts;
  for (const CameraPose& pose : rig_poses(spec)) {
    const RenderResult render = render_frame(spec, intrinsics, pose);
    std::vector<int> frame_counts(spec.objects.size(), 0);
    for (int id : render.object_ids)
      if (id >= 0) ++frame_counts[id];
    counts.push_back(std::move(frame_counts));
  }
  return counts;
}

void generate_scene(const SceneSpec& spec, const NoiseSpec& noise, const fs::path& out_dir) {
  spec.validate();
  noise.validate();

  const int frame_count = spec.cameras.count;
  const std::size_t object_count = spec.objects.size();
  const CameraIntrinsics intrinsics = rig_intrinsics(spec);
  const std::vector<CameraPose> poses = rig_poses(spec);

  fs::create_directories(out_dir / "depth");
  fs::create_directories(out_dir / "masks");

  // Exact renders for every frame.
  std::vector<RenderResult> renders;
  renders.reserve(frame_count);
  for (const CameraPose& pose : poses) renders.push_back(render_frame(spec, intrinsics, pose));

  // Noise draws. Streams are independent and consumed in fixed loop orders so
  // one knob never shifts another knob's draws.
  std::vector<std::vector<Category>> pools;
  pools.reserve(object_count);
  for (const ObjectSpec& object : spec.objects) pools.push_back(swap_pool(object));

  Rng label_rng(mix_seed(spec.seed, kLabelStream));
  Rng jitter_rng(mix_seed(spec.seed, kJitterStream));
  std::vector<std::vector<Category>> frame_labels(frame_count);
  std::vector<std::vector<double>> frame_squery(frame_count);
  for (int n = 0; n < frame_count; ++n) {
    frame_labels[n].reserve(object_count);
    frame_squery[n].reserve(object_count);
    for (std::size_t k = 0; k < object_count; ++k) {
      const bool swap = label_rng.bernoulli(noise.label_swap_prob);
      const int pick = label_rng.uniform_int(0, static_cast<int>(pools[k].size()) - 1);
      frame_labels[n].push_back(swap ? pools[k][pick] : spec.objects[k].label);
      frame_squery[n].push_back(1.0 - jitter_rng.uniform(0.0, noise.confidence_jitter));
    }
  }

  // Proposal line per frame: visible labels ranked by pixel count (ties by
  // first contributing object), truncated to the per-frame cap.
  std::vector<std::string> vocab_lines(frame_count);
  std::unordered_set<Category, CategoryHash> scene_vocabulary;
  for (int n = 0; n < frame_count; ++n) {
    std::vector<int> pixel_counts(object_count, 0);
    for (int id : renders[n].object_ids)
      if (id >= 0) ++pixel_counts[id];

    struct Ranked {
      Category label;
      int pixels = 0;
      std::size_t first_object = 0;
    };
    std::vector<Ranked> ranked;
    for (std::size_t k = 0; k < object_count; ++k) {
      if (pixel_counts[k] == 0) continue;
      const Category& label = frame_labels[n][k];
      auto it = std::find_if(ranked.begin(), ranked.end(),
                             [&](const Ranked& r) { return r.label == label; });
      if (it == ranked.end())
        ranked.push_back(Ranked{label, pixel_counts[k], k});
      else
        it->pixels += pixel_counts[k];
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
      if (a.pixels != b.pixels) return a.pixels > b.pixels;
      return a.first_object < b.first_object;
    });
    if (ranked.size() > static_cast<std::size_t>(spec.max_names_per_frame))
      ranked.resize(static_cast<std::size_t>(spec.max_names_per_frame));

    std::string line;
    for (const Ranked& entry : ranked) {
      if (!line.empty()) line += ", ";
      line += entry.label.str();
      scene_vocabulary.insert(entry.label);
    }
    vocab_lines[n] = std::move(line);
  }

  // Per-frame depth (with noise and reconstruction scale) and mask files.
  const double emit_scale = spec.pose_distortion ? spec.pose_distortion->scale : 1.0;
  Rng depth_rng(mix_seed(spec.seed, kDepthStream));
  for (int n = 0; n < frame_count; ++n) {
    DepthMap depth = renders[n].depth;
    if (noise.depth_sigma > 0.0) {
      for (float& value : depth.values) {
        const double epsilon = depth_rng.normal(0.0, noise.depth_sigma);
        if (DepthMap::is_valid_depth(value))
          value = static_cast<float>(
              std::max(1e-3, static_cast<double>(value) + epsilon));
      }
    }
    if (emit_scale != 1.0)
      for (float& value : depth.values)
        if (DepthMap::is_valid_depth(value))
          value = static_cast<float>(static_cast<double>(value) * emit_scale);
    write_depth(out_dir / "depth" / frame_name(n, "gd1"), depth);

    MaskFileData mask_file;
    mask_file.frame_id = n;
    mask_file.height = spec.image_height;
    mask_file.width = spec.image_width;
    mask_file.presence.frame_id = n;
    for (std::size_t k = 0; k < object_count; ++k) {
      CategoryMask mask;
      mask.frame_id = n;
      mask.height = spec.image_height;
      mask.width = spec.image_width;
      mask.bits.assign(renders[n].object_ids.size(), 0);
      int pixels = 0;
      for (std::size_t i = 0; i < renders[n].object_ids.size(); ++i) {
        if (renders[n].object_ids[i] == static_cast<int>(k)) {
          mask.bits[i] = 1;
          ++pixels;
        }
      }
      if (pixels == 0) continue;

      // A swapped label only survives if it made it into the scene
      // vocabulary; otherwise fall back to the true label, or skip the mask
      // when even that never surfaced in a proposal line.
      Category label = frame_labels[n][k];
      if (!scene_vocabulary.count(label)) label = spec.objects[k].label;
      if (!scene_vocabulary.count(label)) continue;

      mask.category = label;
      mask.s_query = frame_squery[n][k];
      const auto existing = mask_file.presence.scores.find(label);
      if (existing == mask_file.presence.scores.end())
        mask_file.presence.scores.emplace(label, 1.0);
      mask_file.masks.push_back(std::move(mask));
    }
    write_mask_file(out_dir / "masks" / frame_name(n, "txt"), mask_file);
  }

  // Camera track: distorted when a reconstruction frame is requested.
  std::vector<std::pair<int, CameraIntrinsics>> intrinsics_entries;
  std::vector<std::pair<int, CameraPose>> pose_entries;
  for (int n = 0; n < frame_count; ++n) {
    intrinsics_entries.emplace_back(n, intrinsics);
    pose_entries.emplace_back(
        n, spec.pose_distortion ? apply_transform(poses[n], *spec.pose_distortion) : poses[n]);
  }
  write_intrinsics(out_dir / "intrinsics.txt", intrinsics_entries);
  write_poses(out_dir / "poses.txt", pose_entries);

  std::string vocab_text;
  for (const std::string& line : vocab_lines) {
    vocab_text += line;
    vocab_text.push_back('\n');
  }
  {
    std::ofstream out(out_dir / "vocab.txt", std::ios::binary | std::ios::trunc);
    out.write(vocab_text.data(), static_cast<std::streamsize>(vocab_text.size()));
  }

  // Synonym declarations become the grouping response; duplicate member sets
  // collapse to one line.
  bool wrote_groups = false;
  {
    std::string text;
    std::set<std::vector<std::string>> seen;
    int group_index = 0;
    for (std::size_t k = 0; k < object_count; ++k) {
      if (pools[k].size() < 2) continue;
      std::vector<std::string> key;
      for (const Category& member : pools[k]) key.push_back(member.str());
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      text += "g" + std::to_string(group_index++) + ": [";
      for (std::size_t m = 0; m < pools[k].size(); ++m) {
        if (m) text += ", ";
        text += pools[k][m].str();
      }
      text += "]\n";
    }
    if (!text.empty()) {
      std::ofstream out(out_dir / "groups.txt", std::ios::binary | std::ios::trunc);
      out.write(text.data(), static_cast<std::streamsize>(text.size()));
      wrote_groups = true;
    }
  }

  std::vector<GroundTruthBox> gt_boxes;
  for (const ObjectSpec& object : spec.objects)
    gt_boxes.push_back(GroundTruthBox{object.label, object.box});
  write_gt_boxes(out_dir / "gt_boxes.txt", gt_boxes);

  // Stratified vertices over the five exposed faces (the floor-facing face
  // is skipped), proportional to area.
  GroundTruthVertexSet vertices;
  for (std::size_t k = 0; k < object_count; ++k) {
    Rng vertex_rng(mix_seed(spec.seed, kVertexStreamBase + k));
    const Aabb& box = spec.objects[k].box;
    const Point3 extent = box.max - box.min;

    struct Face {
      int fixed_axis;
      double fixed_value;
      int axis_a;
      int axis_b;
      double area;
    };
    const Face faces[5] = {
        {0, box.min.x(), 1, 2, extent.y() * extent.z()},
        {0, box.max.x(), 1, 2, extent.y() * extent.z()},
        {1, box.min.y(), 0, 2, extent.x() * extent.z()},
        {1, box.max.y(), 0, 2, extent.x() * extent.z()},
        {2, box.max.z(), 0, 1, extent.x() * extent.y()},
    };
    double total_area = 0.0;
    for (const Face& face : faces) total_area += face.area;

    int counts[5];
    int assigned = 0;
    for (int f = 0; f < 5; ++f) {
      counts[f] = static_cast<int>(spec.vertices_per_object * faces[f].area / total_area);
      assigned += counts[f];
    }
    for (int f = 0; assigned < spec.vertices_per_object; f = (f + 1) % 5) {
      ++counts[f];
      ++assigned;
    }

    for (int f = 0; f < 5; ++f) {
      const Face& face = faces[f];
      if (counts[f] == 0) continue;
      const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(counts[f]))));
      const int rows = (counts[f] + cols - 1) / cols;
      for (int m = 0; m < counts[f]; ++m) {
        const int row = m / cols;
        const int col = m % cols;
        const double fa = (col + vertex_rng.uniform01()) / cols;
        const double fb = (row + vertex_rng.uniform01()) / rows;
        Point3 position;
        position[face.fixed_axis] = face.fixed_value;
        position[face.axis_a] = box.min[face.axis_a] + fa * extent[face.axis_a];
        position[face.axis_b] = box.min[face.axis_b] + fb * extent[face.axis_b];
        vertices.vertices.push_back(GroundTruthVertexSet::Vertex{
            position, static_cast<int>(k), spec.objects[k].label});
      }
    }
  }
  write_gt_vertices(out_dir / "gt_vertices.txt", vertices);

  if (spec.pose_distortion) {
    write_poses(out_dir / "ref_pose.txt", {{0, poses[0]}});
    write_depth(out_dir / "ref_depth.gd1", renders[0].depth);
  }

  SceneManifest manifest;
  manifest.frames = frame_count;
  manifest.width = spec.image_width;
  manifest.height = spec.image_height;
  std::vector<std::string> files = {"intrinsics.txt", "poses.txt", "vocab.txt",
                                    "gt_boxes.txt", "gt_vertices.txt"};
  if (wrote_groups) files.push_back("groups.txt");
  if (spec.pose_distortion) {
    files.push_back("ref_pose.txt");
    files.push_back("ref_depth.gd1");
  }
  for (int n = 0; n < frame_count; ++n) {
    files.push_back("depth/" + frame_name(n, "gd1"));
    files.push_back("masks/" + frame_name(n, "txt"));
  }
  for (const std::string& relpath : files) {
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(hash_file(out_dir / relpath)));
    manifest.file_hashes[relpath] = hash;
  }
  write_manifest(out_dir, manifest);
}

}  // namespace ovlift
