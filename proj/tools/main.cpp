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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ovlift/harness.hpp"
#include "ovlift/pipeline.hpp"
#include "ovlift/provider.hpp"

namespace {

using namespace ovlift;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

std::vector<double> parse_threshold_list(const std::string& text) {
  std::vector<double> thresholds;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    std::size_t consumed = 0;
    const double value = std::stod(token, &consumed);
    if (consumed != token.size() || !(value > 0.0) || value > 1.0)
      throw ConfigError("IoU thresholds must be numbers in (0, 1]: " + text);
    thresholds.push_back(value);
  }
  if (thresholds.empty()) throw ConfigError("no IoU thresholds given");
  return thresholds;
}

struct RunArgs {
  std::string scene;
  std::string out;
  std::string points_out;
  std::string pose_mode = "given";
  std::string grouping = "compat-groups";
  PipelineConfig config;
};

int do_run(const RunArgs& args) {
  PipelineConfig config = args.config;
  config.pose_mode = args.pose_mode == "estimated" ? PipelineConfig::PoseMode::kEstimated
                                                   : PipelineConfig::PoseMode::kGiven;
  if (args.grouping == "same-category")
    config.grouping = PipelineConfig::GroupingMode::kSameCategory;
  else if (args.grouping == "none")
    config.grouping = PipelineConfig::GroupingMode::kNone;
  else
    config.grouping = PipelineConfig::GroupingMode::kCompatGroups;

  const SceneBundle bundle = load_scene(args.scene, config.frame_budget);
  const PipelineResult result = run_pipeline(bundle, config);
  for (const std::string& warning : result.warnings)
    std::cerr << "warning: grouping response: " << warning << "\n";

  write_detections(args.out, result.instances);
  if (!args.points_out.empty()) write_instance_points(args.points_out, result.instances);

  std::cout << "frames: " << bundle.frames.size() << "\n"
            << "vocabulary: " << result.vocabulary.size() << " categories\n"
            << "groups: " << result.groups.groups().size() << "\n"
            << "fragments: " << result.memory.size() << "\n"
            << "instances: " << result.instances.size() << "\n";
  return 0;
}

struct EvalArgs {
  std::string pred;
  std::string gt_dir;
  std::string iou = "0.25,0.50";
  std::string instance_seg_points;
  double seg_radius = 0.05;
};

int do_eval(const EvalArgs& args) {
  const std::vector<double> thresholds = parse_threshold_list(args.iou);
  const std::filesystem::path gt_dir(args.gt_dir);
  if (!std::filesystem::exists(gt_dir / "gt_boxes.txt"))
    throw ValidationError("no gt_boxes.txt in " + args.gt_dir);

  const std::vector<Detection> detections = read_detections(args.pred);
  const std::vector<GroundTruthBox> gt_boxes = read_gt_boxes(gt_dir / "gt_boxes.txt");
  const DetectionEval detection_eval = evaluate_detections(detections, gt_boxes, thresholds);

  std::optional<SegmentationEval> seg_eval;
  if (!args.instance_seg_points.empty()) {
    if (!std::filesystem::exists(gt_dir / "gt_vertices.txt"))
      throw ValidationError("instance segmentation needs gt_vertices.txt in " + args.gt_dir);
    const GroundTruthVertexSet vertices = read_gt_vertices(gt_dir / "gt_vertices.txt");
    const auto point_sets = read_instance_points(args.instance_seg_points);
    if (point_sets.size() != detections.size())
      throw ValidationError("instance point file and prediction file disagree in count");

    std::vector<Instance> instances;
    instances.reserve(detections.size());
    for (std::size_t i = 0; i < detections.size(); ++i) {
      Instance instance;
      instance.label = detections[i].label;
      instance.score = detections[i].score;
      instance.box = detections[i].box;
      instance.points = point_sets[i];
      instances.push_back(std::move(instance));
    }
    TransferParams params;
    params.radius = args.seg_radius;
    seg_eval = evaluate_instance_segmentation(instances, vertices, params, thresholds);
  }

  std::cout << format_report(detection_eval, seg_eval ? &*seg_eval : nullptr);
  return 0;
}

struct SynthArgs {
  std::string spec;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int do_synth(const SynthArgs& args) {
  auto [spec, noise] = parse_scene_spec(read_text_file(args.spec));
  if (args.seed_given) spec.seed = args.seed;
  generate_scene(spec, noise, args.out);
  std::cout << "scene: " << args.out << "\n"
            << "objects: " << spec.objects.size() << "\n"
            << "frames: " << spec.cameras.count << "\n"
            << "seed: " << spec.seed << "\n";
  return 0;
}

struct GroupArgs {
  std::string vocab;
  std::string fixture;
  std::string endpoint;
  std::string model;
  std::string prompt_file;
  int max_names = 5;
  int max_attempts = 3;
  long timeout_ms = 60000;
};

int do_group(const GroupArgs& args) {
  std::vector<std::vector<Category>> per_view;
  {
    std::stringstream stream(read_text_file(args.vocab));
    std::string line;
    while (std::getline(stream, line))
      per_view.push_back(parse_vocab_response(line, args.max_names));
  }
  const SceneVocabulary vocabulary = aggregate_vocabulary(per_view);
  if (vocabulary.empty()) throw ValidationError("vocabulary file yields no categories");

  std::unique_ptr<ChatClient> client;
  if (!args.fixture.empty()) {
    client = std::make_unique<FixtureChatClient>(args.fixture);
  } else {
    LiveClientOptions options;
    options.endpoint = args.endpoint;
    options.model = args.model;
    options.max_attempts = args.max_attempts;
    options.timeout = std::chrono::milliseconds(args.timeout_ms);
    if (const char* key = std::getenv("OVLIFT_API_KEY")) options.api_key = key;
    if (options.model.empty())
      throw ConfigError("--model is required with --endpoint");
    client = std::make_unique<HttpChatClient>(std::move(options));
  }

  const std::string prompt_template =
      args.prompt_file.empty() ? default_grouping_prompt() : read_text_file(args.prompt_file);
  const std::string response = request_grouping(*client, vocabulary, prompt_template);
  const GroupParseResult parsed = parse_group_spec(response, vocabulary);
  for (const std::string& warning : parsed.warnings)
    std::cerr << "warning: " << warning << "\n";

  for (const auto& group : parsed.groups.groups()) {
    if (!group.from_provider) continue;
    std::cout << group.name << ": [";
    for (std::size_t i = 0; i < group.members.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << group.members[i].str();
    }
    std::cout << "]\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-view open-vocabulary 3D object detection"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "detect objects in a scene directory");
  run_cmd->add_option("--scene", run_args.scene, "scene directory")->required();
  run_cmd->add_option("--out", run_args.out, "detection output file")->required();
  run_cmd->add_option("--points-out", run_args.points_out,
                      "also write per-instance points (needed for eval --instance-seg)");
  run_cmd->add_option("--voxel-size", run_args.config.voxel_size, "voxel edge length, meters");
  run_cmd->add_option("--tau-iou", run_args.config.tau_iou, "voxel IoU merge threshold");
  run_cmd->add_option("--tau-cont", run_args.config.tau_cont,
                      "voxel containment merge threshold");
  run_cmd->add_option("--tau-support", run_args.config.tau_support,
                      "support weight saturation constant");
  run_cmd->add_option("--frames", run_args.config.frame_budget, "frame sampling budget");
  run_cmd->add_option("--k", run_args.config.max_names_per_view,
                      "category proposals kept per view");
  run_cmd->add_option("--min-points", run_args.config.min_fragment_points,
                      "minimum points per fragment");
  run_cmd->add_option("--pose-mode", run_args.pose_mode, "given|estimated")
      ->check(CLI::IsMember({"given", "estimated"}));
  run_cmd->add_option("--grouping", run_args.grouping, "compat-groups|same-category|none")
      ->check(CLI::IsMember({"compat-groups", "same-category", "none"}));

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score detections against ground truth");
  eval_cmd->add_option("--pred", eval_args.pred, "detection file")->required();
  eval_cmd->add_option("--gt", eval_args.gt_dir, "scene directory with ground truth")
      ->required();
  eval_cmd->add_option("--iou", eval_args.iou, "comma-separated IoU thresholds");
  eval_cmd->add_option("--instance-seg", eval_args.instance_seg_points,
                       "instance point file; also runs label-transfer evaluation");
  eval_cmd->add_option("--seg-radius", eval_args.seg_radius,
                       "vertex transfer radius, meters");

  SynthArgs synth_args;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic scene");
  synth_cmd->add_option("--spec", synth_args.spec, "scene description JSON")->required();
  synth_cmd->add_option("--out", synth_args.out, "output scene directory")->required();
  CLI::Option* seed_opt = synth_cmd->add_option("--seed", synth_args.seed, "seed override");

  GroupArgs group_args;
  CLI::App* group_cmd =
      app.add_subcommand("group", "derive compatibility groups for a vocabulary");
  group_cmd->add_option("--vocab", group_args.vocab, "per-view proposal lines")->required();
  CLI::Option* fixture_opt =
      group_cmd->add_option("--fixture", group_args.fixture, "recorded response file");
  group_cmd->add_option("--endpoint", group_args.endpoint, "chat-completions URL")
      ->excludes(fixture_opt);
  group_cmd->add_option("--model", group_args.model, "model name for live requests");
  group_cmd->add_option("--prompt", group_args.prompt_file, "prompt template override");
  group_cmd->add_option("--k", group_args.max_names, "proposals kept per vocab line");
  group_cmd->add_option("--max-attempts", group_args.max_attempts, "live retry budget");
  group_cmd->add_option("--timeout-ms", group_args.timeout_ms, "live request timeout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) return do_run(run_args);
    if (*eval_cmd) return do_eval(eval_args);
    if (*synth_cmd) {
      synth_args.seed_given = seed_opt->count() > 0;
      return do_synth(synth_args);
    }
    if (*group_cmd) {
      if (group_args.fixture.empty() && group_args.endpoint.empty())
        throw ConfigError("group: either --fixture or --endpoint is required");
      return do_group(group_args);
    }
  } catch (const ProviderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
