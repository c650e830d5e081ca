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

#include <doctest.h>

#include <limits>

#include "ovlift/fragments.hpp"
#include "test_util.hpp"

using namespace ovlift;
using test::cat;
using test::simple_intrinsics;

namespace {

// A flat 4x4 frame at constant depth, with every presence score supplied.
struct TinyFrame {
  CameraIntrinsics intrinsics = simple_intrinsics(4, 4);
  CameraPose pose;
  DepthMap depth;
  FramePresence presence;

  explicit TinyFrame(int frame_id = 0) {
    depth.width = 4;
    depth.height = 4;
    depth.values.assign(16, 2.0f);
    presence.frame_id = frame_id;
  }

  CategoryMask mask(const char* name, std::initializer_list<int> pixels,
                    double s_query = 1.0, int frame_id = 0) const {
    CategoryMask m;
    m.frame_id = frame_id;
    m.category = cat(name);
    m.height = 4;
    m.width = 4;
    m.bits.assign(16, 0);
    for (int p : pixels) m.bits[static_cast<std::size_t>(p)] = 1;
    m.s_query = s_query;
    return m;
  }
};

}  // namespace

TEST_SUITE("fragments") {

TEST_CASE("confidence composes multiplicatively inside the unit interval") {
  CHECK(compose_confidence(0.8, 0.5) == doctest::Approx(0.4));
  CHECK(compose_confidence(0.0, 1.0) == 0.0);
  CHECK(compose_confidence(1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(compose_confidence(-0.1, 0.5), ValidationError);
  CHECK_THROWS_AS(compose_confidence(0.5, 1.1), ValidationError);
  CHECK_THROWS_AS(compose_confidence(std::numeric_limits<double>::quiet_NaN(), 0.5),
                  ValidationError);
}

TEST_CASE("presence lookups are total over queried categories") {
  FramePresence presence;
  presence.scores[cat("chair")] = 0.7;
  CHECK(presence.score_for(cat("chair")) == 0.7);
  CHECK_THROWS_AS(presence.score_for(cat("table")), ValidationError);
}

TEST_CASE("build_fragment lifts, scores, and quantizes one mask") {
  TinyFrame frame;
  frame.presence.scores[cat("chair")] = 0.5;
  const CategoryMask mask = frame.mask("chair", {0, 1, 2, 3, 4});

  const auto fragment = build_fragment(mask, frame.presence, frame.depth,
                                       frame.intrinsics, frame.pose, 0.05);
  REQUIRE(fragment.has_value());
  CHECK(fragment->points.size() == 5);
  CHECK(fragment->confidence == doctest::Approx(0.5));
  CHECK(fragment->category.str() == "chair");
  CHECK(fragment->frame_id == 0);
  CHECK_FALSE(fragment->voxels.empty());
  CHECK(fragment->extent >= 0.0);
}

TEST_CASE("build_fragment returns nothing when no depth survives") {
  TinyFrame frame;
  frame.presence.scores[cat("chair")] = 1.0;
  frame.depth.values.assign(16, 0.0f);
  const auto fragment = build_fragment(frame.mask("chair", {0, 1}), frame.presence,
                                       frame.depth, frame.intrinsics, frame.pose, 0.05);
  CHECK_FALSE(fragment.has_value());
}

TEST_CASE("build_fragment checks frame ids") {
  TinyFrame frame(1);
  frame.presence.scores[cat("chair")] = 1.0;
  const CategoryMask mask = frame.mask("chair", {0}, 1.0, 2);
  CHECK_THROWS_AS((void)build_fragment(mask, frame.presence, frame.depth,
                                       frame.intrinsics, frame.pose, 0.05),
                  ValidationError);
}

TEST_CASE("memory orders frames first, then categories by vocabulary index") {
  SceneVocabulary vocab;
  vocab.insert(cat("table"));
  vocab.insert(cat("chair"));

  TinyFrame frame;
  frame.presence.scores[cat("chair")] = 1.0;
  frame.presence.scores[cat("table")] = 1.0;
  // File order chair(A), table, chair(B); distinct s_query to tell masks apart.
  std::vector<CategoryMask> masks{frame.mask("chair", {0, 1, 2}, 0.9),
                                  frame.mask("table", {4, 5, 6}, .8),
                                  frame.mask("chair", {8, 9, 10}, 0.7)};

  std::vector<FrameInputs> inputs{{0, &frame.intrinsics, &frame.pose, &frame.depth,
                                   &masks, &frame.presence}};
  const FragmentMemory memory = build_fragment_memory(inputs, vocab, 0.05, 1);

  REQUIRE(memory.size() == 3);
  CHECK(memory[0].category.str() == "table");
  CHECK(memory[1].category.str() == "chair");
  CHECK(memory[1].confidence == doctest::Approx(0.9));  // file order kept per category
  CHECK(memory[2].category.str() == "chair");
  CHECK(memory[2].confidence == doctest::Approx(0.7));
}

TEST_CASE("memory rejects categories outside the vocabulary") {
  SceneVocabulary vocab;
  vocab.insert(cat("table"));

  TinyFrame frame;
  frame.presence.scores[cat("chair")] = 1.0;
  std::vector<CategoryMask> masks{frame.mask("chair", {0})};
  std::vector<FrameInputs> inputs{{0, &frame.intrinsics, &frame.pose, &frame.depth,
                                   &masks, &frame.presence}};
  CHECK_THROWS_AS((void)build_fragment_memory(inputs, vocab, 0.05, 1), ValidationError);
}

TEST_CASE("memory drops fragments below the point floor") {
  SceneVocabulary vocab;
  vocab.insert(cat("chair"));

  TinyFrame frame;
  frame.presence.scores[cat("chair")] = 1.0;
  std::vector<CategoryMask> masks{frame.mask("chair", {0, 1, 2})};
  std::vector<FrameInputs> inputs{{0, &frame.intrinsics, &frame.pose, &frame.depth,
                                   &masks, &frame.presence}};

  CHECK(build_fragment_memory(inputs, vocab, 0.05, 3).size() == 1);
  CHECK(build_fragment_memory(inputs, vocab, 0.05, 4).size() == 0);
  CHECK_THROWS_AS((void)build_fragment_memory(inputs, vocab, 0.05, 0), ConfigError);
}

}  // TEST_SUITE
