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

#include "ovlift/scene_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ovlift {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw ParseError("error reading file: " + path.string());
  return std::move(buffer).str();
}

void write_file_bytes(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot create file: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("error writing file: " + path.string());
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::string join_tokens(const std::vector<std::string_view>& tokens, std::size_t first,
                        std::size_t last) {
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (!out.empty()) out.push_back(' ');
    out.append(tokens[i]);
  }
  return out;
}

double parse_double(std::string_view token, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(context + ": expected number, got '" + std::string(token) + "'");
  return value;
}

long long parse_int(std::string_view token, const std::string& context) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(context + ": expected integer, got '" + std::string(token) + "'");
  return value;
}

std::string location(const fs::path& path, int line_no) {
  return path.filename().string() + ":" + std::to_string(line_no);
}

Category parse_category(std::string_view raw, const std::string& context) {
  const auto category = Category::canonicalize(raw);
  if (!category) throw ParseError(context + ": empty category name");
  return *category;
}

void append_formatted(std::string& out, const char* format, ...)
    __attribute__((format(printf, 2, 3)));

void append_formatted(std::string& out, const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  const int written = std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  out.append(buffer, static_cast<std::size_t>(written));
}

constexpr char kDepthMagic[] = "GD1";

std::string frame_file_name(int frame_id, const char* extension) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "frame_%06d.%s", frame_id, extension);
  return buffer;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t hash_file(const fs::path& path) { return fnv1a64(read_file_bytes(path)); }

void write_manifest(const fs::path& dir, const SceneManifest& manifest) {
  json j;
  j["format"] = "ovscene1";
  j["frames"] = manifest.frames;
  j["width"] = manifest.width;
  j["height"] = manifest.height;
  j["files"] = json::object();
  for (const auto& [relpath, hash] : manifest.file_hashes) j["files"][relpath] = hash;
  write_file_bytes(dir / "manifest.json", j.dump(2) + "\n");
}

SceneManifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  json j;
  try {
    j = json::parse(read_file_bytes(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "ovscene1")
      throw ParseError(path.string() + ": unknown scene format");
    SceneManifest manifest;
    manifest.frames = j.at("frames").get<int>();
    manifest.width = j.at("width").get<int>();
    manifest.height = j.at("height").get<int>();
    for (const auto& [relpath, hash] : j.at("files").items())
      manifest.file_hashes[relpath] = hash.get<std::string>();
    return manifest;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void verify_manifest(const fs::path& dir, const SceneManifest& manifest) {
  for (const auto& [relpath, expected] : manifest.file_hashes) {
    const fs::path path = dir / relpath;
    if (!fs::exists(path))
      throw ValidationError("manifest lists missing file: " + path.string());
    char actual[17];
    std::snprintf(actual, sizeof(actual), "%016llx",
                  static_cast<unsigned long long>(hash_file(path)));
    if (expected != actual)
      throw ValidationError("content hash mismatch for " + path.string());
  }
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> encode_rle(
    const std::vector<std::uint8_t>& bits) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
  std::size_t i = 0;
  while (i < bits.size()) {
    if (!bits[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < bits.size() && bits[j]) ++j;
    runs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return runs;
}

std::vector<std::uint8_t> decode_rle(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& runs, std::size_t size) {
  std::vector<std::uint8_t> bits(size, 0);
  std::uint64_t cursor = 0;
  for (const auto& [start, length] : runs) {
    if (start < cursor) throw ParseError("rle: spans out of order or overlapping");
    if (length == 0) throw ParseError("rle: zero-length span");
    if (static_cast<std::uint64_t>(start) + length > size)
      throw ParseError("rle: span exceeds mask size");
    std::fill(bits.begin() + start, bits.begin() + start + length, std::uint8_t{1});
    cursor = static_cast<std::uint64_t>(start) + length;
  }
  return bits;
}

void write_depth(const fs::path& path, const DepthMap& depth) {
  if (depth.values.size() != static_cast<std::size_t>(depth.width) * depth.height)
    throw ValidationError("depth map buffer size mismatch");
  std::string bytes;
  char header[64];
  std::snprintf(header, sizeof(header), "%s %d %d\n", kDepthMagic, depth.width, depth.height);
  bytes.append(header);
  bytes.reserve(bytes.size() + depth.values.size() * 4);
  for (float value : depth.values) {
    const auto raw = std::bit_cast<std::uint32_t>(value);
    bytes.push_back(static_cast<char>(raw & 0xff));
    bytes.push_back(static_cast<char>((raw >> 8) & 0xff));
    bytes.push_back(static_cast<char>((raw >> 16) & 0xff));
    bytes.push_back(static_cast<char>((raw >> 24) & 0xff));
  }
  write_file_bytes(path, bytes);
}

DepthMap read_depth(const fs::path& path) {
  const std::string bytes = read_file_bytes(path);
  const std::size_t header_end = bytes.find('\n');
  if (header_end == std::string::npos)
    throw ParseError(path.string() + ": missing depth header");
  const auto tokens = split_tokens(std::string_view(bytes).substr(0, header_end));
  if (tokens.size() != 3 || tokens[0] != kDepthMagic)
    throw ParseError(path.string() + ": malformed depth header");

  DepthMap depth;
  depth.width = static_cast<int>(parse_int(tokens[1], location(path, 1)));
  depth.height = static_cast<int>(parse_int(tokens[2], location(path, 1)));
  if (depth.width <= 0 || depth.height <= 0)
    throw ParseError(path.string() + ": non-positive depth dimensions");

  const std::size_t count = static_cast<std::size_t>(depth.width) * depth.height;
  const std::size_t payload = bytes.size() - header_end - 1;
  if (payload != count * 4)
    throw ParseError(path.string() + ": depth payload size mismatch");

  depth.values.resize(count);
  const unsigned char* p =
      reinterpret_cast<const unsigned char*>(bytes.data() + header_end + 1);
  for (std::size_t i = 0; i < count; ++i, p += 4) {
    const std::uint32_t raw = static_cast<std::uint32_t>(p[0]) |
                              (static_cast<std::uint32_t>(p[1]) << 8) |
                              (static_cast<std::uint32_t>(p[2]) << 16) |
                              (static_cast<std::uint32_t>(p[3]) << 24);
    depth.values[i] = std::bit_cast<float>(raw);
  }
  return depth;
}

void write_mask_file(const fs::path& path, const MaskFileData& data) {
  std::string out;
  append_formatted(out, "frame %d\n", data.frame_id);
  append_formatted(out, "size %d %d\n", data.height, data.width);
  for (const CategoryMask& mask : data.masks) {
    append_formatted(out, "cat %s %.17g %.17g\n", mask.category.str().c_str(), mask.s_query,
                     data.presence.score_for(mask.category));
    std::string rle;
    for (const auto& [start, length] : encode_rle(mask.bits)) {
      if (!rle.empty()) rle.push_back(' ');
      append_formatted(rle, "%u:%u", start, length);
    }
    out += rle;
    out.push_back('\n');
  }
  write_file_bytes(path, out);
}

MaskFileData read_mask_file(const fs::path& path) {
  const std::string text = read_file_bytes(path);
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw ParseError(path.string() + ": truncated mask file");

  MaskFileData data;
  {
    const auto tokens = split_tokens(lines[0]);
    if (tokens.size() != 2 || tokens[0] != "frame")
      throw ParseError(location(path, 1) + ": expected 'frame <id>'");
    data.frame_id = static_cast<int>(parse_int(tokens[1], location(path, 1)));
  }
  {
    const auto tokens = split_tokens(lines[1]);
    if (tokens.size() != 3 || tokens[0] != "size")
      throw ParseError(location(path, 2) + ": expected 'size <height> <width>'");
    data.height = static_cast<int>(parse_int(tokens[1], location(path, 2)));
    data.width = static_cast<int>(parse_int(tokens[2], location(path, 2)));
    if (data.height <= 0 || data.width <= 0)
      throw ParseError(location(path, 2) + ": non-positive mask dimensions");
  }
  data.presence.frame_id = data.frame_id;

  const std::size_t pixel_count = static_cast<std::size_t>(data.height) * data.width;
  std::size_t i = 2;
  while (i < lines.size()) {
    const auto tokens = split_tokens(lines[i]);
    const std::string ctx = location(path, static_cast<int>(i) + 1);
    if (tokens.size() < 4 || tokens[0] != "cat")
      throw ParseError(ctx + ": expected 'cat <name> <s_query> <s_pres>'");

    CategoryMask mask;
    mask.frame_id = data.frame_id;
    mask.height = data.height;
    mask.width = data.width;
    mask.category = parse_category(join_tokens(tokens, 1, tokens.size() - 2), ctx);
    mask.s_query = parse_double(tokens[tokens.size() - 2], ctx);
    const double s_pres = parse_double(tokens[tokens.size() - 1], ctx);

    const auto [it, inserted] = data.presence.scores.emplace(mask.category, s_pres);
    if (!inserted && it->second != s_pres)
      throw ValidationError(ctx + ": inconsistent presence score for '" +
                            mask.category.str() + "'");

    if (++i >= lines.size()) throw ParseError(ctx + ": missing run-length line");
    const std::string rle_ctx = location(path, static_cast<int>(i) + 1);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
    for (std::string_view span : split_tokens(lines[i])) {
      const std::size_t colon = span.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(rle_ctx + ": expected '<start>:<length>' span");
      runs.emplace_back(
          static_cast<std::uint32_t>(parse_int(span.substr(0, colon), rle_ctx)),
          static_cast<std::uint32_t>(parse_int(span.substr(colon + 1), rle_ctx)));
    }
    try {
      mask.bits = decode_rle(runs, pixel_count);
    } catch (const ParseError& e) {
      throw ParseError(rle_ctx + ": " + e.what());
    }
    data.masks.push_back(std::move(mask));
    ++i;
  }
  return data;
}

void write_intrinsics(const fs::path& path,
                      const std::vector<std::pair<int, CameraIntrinsics>>& entries) {
  std::string out;
  for (const auto& [frame_id, k] : entries)
    append_formatted(out, "frame %d %.17g %.17g %.17g %.17g %d %d\n", frame_id, k.fx, k.fy,
                     k.cx, k.cy, k.width, k.height);
  write_file_bytes(path, out);
}

std::map<int, CameraIntrinsics> read_intrinsics(const fs::path& path) {
  std::map<int, CameraIntrinsics> entries;
  const std::string text = read_file_bytes(path);
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = split_tokens(lines[i]);
    if (tokens.empty()) continue;
    const std::string ctx = location(path, static_cast<int>(i) + 1);
    if (tokens.size() != 8 || tokens[0] != "frame")
      throw ParseError(ctx + ": expected 'frame <id> <fx> <fy> <cx> <cy> <width> <height>'");
    const int frame_id = static_cast<int>(parse_int(tokens[1], ctx));
    CameraIntrinsics k;
    k.fx = parse_double(tokens[2], ctx);
    k.fy = parse_double(tokens[3], ctx);
    k.cx = parse_double(tokens[4], ctx);
    k.cy = parse_double(tokens[5], ctx);
    k.width = static_cast<int>(parse_int(tokens[6], ctx));
    k.height = static_cast<int>(parse_int(tokens[7], ctx));
    if (!entries.emplace(frame_id, k).second)
      throw ParseError(ctx + ": duplicate frame id");
  }
  return entries;
}

void write_poses(const fs::path& path,
                 const std::vector<std::pair<int, CameraPose>>& entries) {
  std::string out;
  for (const auto& [frame_id, pose] : entries) {
    append_formatted(out, "frame %d", frame_id);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) append_formatted(out, " %.17g", pose.rotation(r, c));
    for (int r = 0; r < 3; ++r) append_formatted(out, " %.17g", pose.translation(r));
    out.push_back('\n');
  }
  write_file_bytes(path, out);
}

std::map<int, CameraPose> read_poses(const fs::path& path) {
  std::map<int, CameraPose> entries;
  const std::string text = read_file_bytes(path);
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = split_tokens(lines[i]);
    if (tokens.empty()) continue;
    const std::string ctx = location(path, static_cast<int>(i) + 1);
    if (tokens.size() != 14 || tokens[0] != "frame")
      throw ParseError(ctx + ": expected 'frame <id> <9 rotation> <3 translation>'");
    const int frame_id = static_cast<int>(parse_int(tokens[1], ctx));
    CameraPose pose;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        pose.rotation(r, c) = parse_double(tokens[2 + r * 3 + c], ctx);
    for (int r = 0; r < 3; ++r) pose.translation(r) = parse_double(tokens[11 + r], ctx);
    if (!entries.emplace(frame_id, pose).second)
      throw ParseError(ctx + ": duplicate frame id");
  }
  return entries;
}

void write_gt_boxes(const fs::path& path, const std::vector<GroundTruthBox>& boxes) {
  std::string out;
  for (const GroundTruthBox& gt : boxes)
    append_formatted(out, "label %s box %.6f %.6f %.6f %.6f %.6f %.6f\n",
                     gt.label.str().c_str(), gt.box.min.x(), gt.box.min.y(), gt.box.min.z(),
                     gt.box.max.x(), gt.box.max.y(), gt.box.max.z());
  write_file_bytes(path, out);
}

std::vector<GroundTruthBox> read_gt_boxes(const fs::path& path) {
  std::vector<GroundTruthBox> boxes;
  const std::string text = read_file_bytes(path);
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = split_tokens(lines[i]);
    if (tokens.empty()) continue;
    const std::string ctx = location(path, static_cast<int>(i) + 1);
    // The label may contain spaces, so the box keyword is located from the
    // end of the line.
    if (tokens.size() < 9 || tokens[0] != "label" || tokens[tokens.size() - 7] != "box")
      throw ParseError(ctx + ": expected 'label <name> box <6 numbers>'");
    GroundTruthBox gt;
    gt.label = parse_category(join_tokens(tokens, 1, tokens.size() - 7), ctx);
    double values[6];
    for (int v = 0; v < 6; ++v)
      values[v] = parse_double(tokens[tokens.size() - 6 + v], ctx);
    gt.box.min = Point3(values[0], values[1], values[2]);
    gt.box.max = Point3(values[3], values[4], values[5]);
    if ((gt.box.max - gt.box.min).minCoeff() < 0.0)
      throw ValidationError(ctx + ": box max below min");
    boxes.push_back(std::move(gt));
  }
  return boxes;
}

void write_gt_vertices(const fs::path& path, const GroundTruthVertexSet& set) {
  std::string out;
  append_formatted(out, "GV1 %zu\n", set.vertices.size());
  for (const auto& vertex : set.vertices)
    append_formatted(out, "%.9g %.9g %.9g %d %s\n", vertex.position.x(), vertex.position.y(),
                     vertex.position.z(), vertex.instance_id, vertex.label.str().c_str());
  write_file_bytes(path, out);
}

GroundTruthVertexSet read_gt_vertices(const fs::path& path) {
  const std::string text = read_file_bytes(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(path.string() + ": empty vertex file");
  const auto header = split_tokens(lines[0]);
  if (header.size() != 2 || header[0] != "GV1")
    throw ParseError(location(path, 1) + ": expected 'GV1 <count>'");
  const long long count = parse_int(header[1], location(path, 1));
  if (count < 0 || static_cast<std::size_t>(count) != lines.size() - 1)
    throw ParseError(path.string() + ": vertex count mismatch");

  GroundTruthVertexSet set;
  set.vertices.reserve(static_cast<std::size_t>(count));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto tokens = split_tokens(lines[i]);
    const std::string ctx = location(path, static_cast<int>(i) + 1);
    if (tokens.size() < 5)
      throw ParseError(ctx + ": expected '<x> <y> <z> <instance id> <label>'");
    GroundTruthVertexSet::Vertex vertex;
    vertex.position = Point3(parse_double(tokens[0], ctx), parse_double(tokens[1], ctx),
                             parse_double(tokens[2], ctx));
    vertex.instance_id = static_cast<int>(parse_int(tokens[3], ctx));
    vertex.label = parse_category(join_tokens(tokens, 4, tokens.size()), ctx);
    set.vertices.push_back(std::move(vertex));
  }
  set.validate();
  return set;
}

void write_detections(const fs::path& path, const std::vector<Instance>& instances) {
  std::string out;
  for (const Instance& instance : instances)
    append_formatted(out, "label %s score %.6f box %.6f %.6f %.6f %.6f %.6f %.6f\n",
                     instance.label.str().c_str(), instance.score, instance.box.min.x(),
                     instance.box.min.y(), instance.box.min.z(), instance.box.max.x(),
                     instance.box.max.y(), instance.box.max.z());
  write_file_bytes(path, out);
}

std::vector<Detection> read_detections(const fs::path& path) {
  std::vector<Detection> detections;
  const std::string text = read_file_bytes(path);
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tokens = split_tokens(lines[i]);
    if (tokens.empty()) continue;
    const std::string ctx = location(path, static_cast<int>(i) + 1);
    if (tokens.size() < 11 || tokens[0] != "label" || tokens[tokens.size() - 7] != "box" ||
        tokens[tokens.size() - 9] != "score")
      throw ParseError(ctx + ": expected 'label <name> score <s> box <6 numbers>'");
    Detection d;
    d.label = parse_category(join_tokens(tokens, 1, tokens.size() - 9), ctx);
    d.score = parse_double(tokens[tokens.size() - 8], ctx);
    double values[6];
    for (int v = 0; v < 6; ++v)
      values[v] = parse_double(tokens[tokens.size() - 6 + v], ctx);
    d.box.min = Point3(values[0], values[1], values[2]);
    d.box.max = Point3(values[3], values[4], values[5]);
    detections.push_back(std::move(d));
  }
  return detections;
}

void write_instance_points(const fs::path& path, const std::vector<Instance>& instances) {
  std::string out;
  append_formatted(out, "IP1 %zu\n", instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    append_formatted(out, "instance %zu points %zu\n", i, instances[i].points.size());
    for (const Point3& p : instances[i].points)
      append_formatted(out, "%.9g %.9g %.9g\n", p.x(), p.y(), p.z());
  }
  write_file_bytes(path, out);
}

std::vector<std::vector<Point3>> read_instance_points(const fs::path& path) {
  const std::string text = read_file_bytes(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(path.string() + ": empty instance point file");
  const auto header = split_tokens(lines[0]);
  if (header.size() != 2 || header[0] != "IP1")
    throw ParseError(location(path, 1) + ": expected 'IP1 <count>'");
  const long long count = parse_int(header[1], location(path, 1));

  std::vector<std::vector<Point3>> instances;
  std::size_t i = 1;
  for (long long k = 0; k < count; ++k) {
    if (i >= lines.size()) throw ParseError(path.string() + ": truncated instance list");
    const std::string ctx = location(path, static_cast<int>(i) + 1);
    const auto tokens = split_tokens(lines[i]);
    if (tokens.size() != 4 || tokens[0] != "instance" || tokens[2] != "points")
      throw ParseError(ctx + ": expected 'instance <k> points <n>'");
    if (parse_int(tokens[1], ctx) != k)
      throw ParseError(ctx + ": instance index out of order");
    const long long n = parse_int(tokens[3], ctx);
    ++i;
    std::vector<Point3> points;
    points.reserve(static_cast<std::size_t>(n));
    for (long long p = 0; p < n; ++p, ++i) {
      if (i >= lines.size()) throw ParseError(path.string() + ": truncated point list");
      const std::string pctx = location(path, static_cast<int>(i) + 1);
      const auto xyz = split_tokens(lines[i]);
      if (xyz.size() != 3) throw ParseError(pctx + ": expected '<x> <y> <z>'");
      points.emplace_back(parse_double(xyz[0], pctx), parse_double(xyz[1], pctx),
                          parse_double(xyz[2], pctx));
    }
    instances.push_back(std::move(points));
  }
  if (i != lines.size()) throw ParseError(path.string() + ": trailing content");
  return instances;
}

std::vector<int> sample_frame_indices(int total, int budget) {
  if (total < 0 || budget <= 0)
    throw ConfigError("sample_frame_indices: total must be >= 0 and budget positive");
  std::vector<int> indices;
  if (total == 0) return indices;
  if (budget >= total) {
    indices.resize(total);
    for (int i = 0; i < total; ++i) indices[i] = i;
    return indices;
  }
  if (budget == 1) return {0};
  indices.reserve(budget);
  const double step = static_cast<double>(total - 1) / static_cast<double>(budget - 1);
  for (int i = 0; i < budget; ++i)
    indices.push_back(static_cast<int>(std::llround(i * step)));
  return indices;
}

SceneBundle load_scene(const fs::path& dir, int frame_budget) {
  if (!fs::is_directory(dir))
    throw ValidationError("scene directory not found: " + dir.string());
  const SceneManifest manifest = read_manifest(dir);
  verify_manifest(dir, manifest);
  if (manifest.frames <= 0)
    throw ValidationError(dir.string() + ": manifest reports no frames");

  SceneBundle bundle;
  bundle.width = manifest.width;
  bundle.height = manifest.height;

  const auto intrinsics = read_intrinsics(dir / "intrinsics.txt");
  const auto poses = read_poses(dir / "poses.txt");
  const std::string vocab_text = read_file_bytes(dir / "vocab.txt");
  const auto vocab_lines = split_lines(vocab_text);
  if (vocab_lines.size() < static_cast<std::size_t>(manifest.frames))
    throw ValidationError(dir.string() + ": vocab.txt has fewer lines than frames");

  for (int frame_id : sample_frame_indices(manifest.frames, frame_budget)) {
    FrameData frame;
    frame.frame_id = frame_id;

    const auto k_it = intrinsics.find(frame_id);
    if (k_it == intrinsics.end())
      throw ValidationError("intrinsics missing for frame " + std::to_string(frame_id));
    frame.intrinsics = k_it->second;
    frame.intrinsics.validate();
    if (frame.intrinsics.width != manifest.width ||
        frame.intrinsics.height != manifest.height)
      throw ValidationError("intrinsics resolution differs from manifest for frame " +
                            std::to_string(frame_id));

    const auto pose_it = poses.find(frame_id);
    if (pose_it == poses.end())
      throw ValidationError("pose missing for frame " + std::to_string(frame_id));
    frame.pose = pose_it->second;
    frame.pose.validate();

    frame.depth = read_depth(dir / "depth" / frame_file_name(frame_id, "gd1"));
    if (frame.depth.width != manifest.width || frame.depth.height != manifest.height)
      throw ValidationError("depth resolution differs from manifest for frame " +
                            std::to_string(frame_id));

    MaskFileData mask_data = read_mask_file(dir / "masks" / frame_file_name(frame_id, "txt"));
    if (mask_data.frame_id != frame_id)
      throw ValidationError("mask file frame id mismatch for frame " +
                            std::to_string(frame_id));
    if (mask_data.width != manifest.width || mask_data.height != manifest.height)
      throw ValidationError("mask resolution differs from manifest for frame " +
                            std::to_string(frame_id));
    frame.masks = std::move(mask_data.masks);
    frame.presence = std::move(mask_data.presence);

    frame.vocab_line = std::string(vocab_lines[static_cast<std::size_t>(frame_id)]);
    bundle.frames.push_back(std::move(frame));
  }

  if (fs::exists(dir / "groups.txt"))
    bundle.grouping_text = read_file_bytes(dir / "groups.txt");
  if (fs::exists(dir / "gt_boxes.txt"))
    bundle.gt_boxes = read_gt_boxes(dir / "gt_boxes.txt");
  if (fs::exists(dir / "gt_vertices.txt"))
    bundle.gt_vertices = read_gt_vertices(dir / "gt_vertices.txt");
  if (fs::exists(dir / "ref_pose.txt")) {
    const auto entries = read_poses(dir / "ref_pose.txt");
    if (entries.size() != 1)
      throw ValidationError(dir.string() + ": ref_pose.txt must hold exactly one pose");
    bundle.ref_pose = entries.begin()->second;
    bundle.ref_pose->validate();
  }
  if (fs::exists(dir / "ref_depth.gd1"))
    bundle.ref_depth = read_depth(dir / "ref_depth.gd1");

  return bundle;
}

}  // namespace ovlift
