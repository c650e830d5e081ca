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

#include "ovlift/provider.hpp"

#include <doctest.h>

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ovlift/error.hpp"
#include "test_util.hpp"

namespace ovlift {
namespace {

using nlohmann::json;
using test::TempDir;
using test::cat;

// Scripted transport: returns canned results in order and records each call.
class FakeTransport final : public HttpTransport {
 public:
  explicit FakeTransport(std::vector<HttpResult> script) : script_(std::move(script)) {}

  HttpResult post(const std::string& url,
                  const std::vector<std::pair<std::string, std::string>>& headers,
                  const std::string& body, std::chrono::milliseconds) override {
    urls.push_back(url);
    bodies.push_back(body);
    header_log.push_back(headers);
    if (calls >= script_.size()) return HttpResult{0, "", "script exhausted"};
    return script_[calls++];
  }

  std::size_t calls = 0;
  std::vector<std::string> urls;
  std::vector<std::string> bodies;
  std::vector<std::vector<std::pair<std::string, std::string>>> header_log;

 private:
  std::vector<HttpResult> script_;
};

std::string ok_body(const std::string& text) {
  json j;
  j["choices"] = json::array({json{{"message", json{{"content", text}}}}});
  return j.dump();
}

LiveClientOptions fast_options() {
  LiveClientOptions options;
  options.endpoint = "http://provider.invalid/v1/chat/completions";
  options.model = "test-model";
  options.api_key = "sk-test";
  options.max_attempts = 3;
  options.initial_backoff = std::chrono::milliseconds(0);  // no sleeping in tests
  return options;
}

TEST_CASE("fixture client replays a file verbatim and counts calls") {
  TempDir dir("fixture");
  const auto path = dir.path() / "response.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "chair, table, lamp\n";
  }

  FixtureChatClient client(path);
  ChatRequest request;
  request.messages.push_back(ChatMessage{"user", "what do you see?", "file://img.png"});
  CHECK(client.complete(request) == "chair, table, lamp\n");
  CHECK(client.complete(request) == "chair, table, lamp\n");
  CHECK(client.calls() == 2);

  FixtureChatClient missing(dir.path() / "absent.txt");
  CHECK_THROWS_AS(missing.complete(request), ValidationError);
}

TEST_CASE("chat body carries the model and both message forms") {
  ChatRequest request;
  request.model = "";
  request.messages.push_back(ChatMessage{"system", "be terse", std::nullopt});
  request.messages.push_back(ChatMessage{"user", "name the objects", "data:image/png;base64,AA=="});

  const json body = json::parse(build_chat_body(request, "fallback-model"));
  CHECK(body.at("model") == "fallback-model");
  REQUIRE(body.at("messages").size() == 2);
  CHECK(body["messages"][0]["role"] == "system");
  CHECK(body["messages"][0]["content"] == "be terse");  // plain string form

  const json& parts = body["messages"][1]["content"];
  REQUIRE(parts.is_array());
  REQUIRE(parts.size() == 2);
  CHECK(parts[0]["type"] == "text");
  CHECK(parts[0]["text"] == "name the objects");
  CHECK(parts[1]["type"] == "image_url");
  CHECK(parts[1]["image_url"]["url"] == "data:image/png;base64,AA==");

  request.model = "explicit-model";
  const json body2 = json::parse(build_chat_body(request, "fallback-model"));
  CHECK(body2.at("model") == "explicit-model");
}

TEST_CASE("chat responses parse string and part-list content") {
  CHECK(parse_chat_response(ok_body("sofa, rug")) == "sofa, rug");

  json parts;
  parts["choices"] = json::array({json{
      {"message",
       json{{"content", json::array({json{{"type", "text"}, {"text", "sofa"}},
                                     json{{"type", "image_url"}, {"image_url", "x"}},
                                     json{{"type", "text"}, {"text", ", rug"}}})}}}}});
  CHECK(parse_chat_response(parts.dump()) == "sofa, rug");

  CHECK_THROWS_AS(parse_chat_response("not json"), ProviderError);
  CHECK_THROWS_AS(parse_chat_response("{}"), ProviderError);
  CHECK_THROWS_AS(parse_chat_response(R"({"choices": []})"), ProviderError);
  CHECK_THROWS_AS(parse_chat_response(R"({"choices": [{"message": {"content": 42}}]})"),
                  ProviderError);
}

TEST_CASE("live client retries transient failures and then succeeds") {
  auto transport = std::make_unique<FakeTransport>(std::vector<HttpResult>{
      HttpResult{500, "worker crashed", ""},
      HttpResult{0, "", "connection reset"},
      HttpResult{200, ok_body("chair"), ""},
  });
  FakeTransport* raw = transport.get();

  HttpChatClient client(fast_options(), std::move(transport));
  ChatRequest request;
  request.messages.push_back(ChatMessage{"user", "hello", std::nullopt});
  CHECK(client.complete(request) == "chair");
  CHECK(client.attempts_made() == 3);
  CHECK(raw->calls == 3);

  // Authorization header present on every attempt.
  for (const auto& headers : raw->header_log) {
    REQUIRE(headers.size() == 1);
    CHECK(headers[0].first == "Authorization");
    CHECK(headers[0].second == "Bearer sk-test");
  }
  CHECK(raw->urls[0] == "http://provider.invalid/v1/chat/completions");
}

TEST_CASE("live client fails fast on non-retryable statuses") {
  auto transport = std::make_unique<FakeTransport>(std::vector<HttpResult>{
      HttpResult{404, "no such route", ""},
      HttpResult{200, ok_body("never reached"), ""},
  });
  FakeTransport* raw = transport.get();

  HttpChatClient client(fast_options(), std::move(transport));
  ChatRequest request;
  request.messages.push_back(ChatMessage{"user", "hello", std::nullopt});
  CHECK_THROWS_AS(client.complete(request), ProviderError);
  CHECK(client.attempts_made() == 1);
  CHECK(raw->calls == 1);
}

TEST_CASE("live client surfaces exhaustion with the attempt count") {
  auto transport = std::make_unique<FakeTransport>(std::vector<HttpResult>{
      HttpResult{429, "slow down", ""},
      HttpResult{503, "overloaded", ""},
      HttpResult{0, "", "timeout"},
  });

  HttpChatClient client(fast_options(), std::move(transport));
  ChatRequest request;
  request.messages.push_back(ChatMessage{"user", "hello", std::nullopt});
  try {
    client.complete(request);
    FAIL("expected ProviderError");
  } catch (const ProviderError& e) {
    const std::string what = e.what();
    CHECK(what.find("3 attempts") != std::string::npos);
    CHECK(what.find("timeout") != std::string::npos);
  }
  CHECK(client.attempts_made() == 3);
}

TEST_CASE("live client validates its configuration") {
  LiveClientOptions options = fast_options();
  options.endpoint.clear();
  CHECK_THROWS_AS(HttpChatClient(options, std::make_unique<FakeTransport>(
                                              std::vector<HttpResult>{})),
                  ConfigError);

  options = fast_options();
  options.max_attempts = 0;
  CHECK_THROWS_AS(HttpChatClient(options, std::make_unique<FakeTransport>(
                                              std::vector<HttpResult>{})),
                  ConfigError);
}

TEST_CASE("prompt templates substitute their placeholders") {
  const std::string vocab_prompt = render_vocabulary_prompt(default_vocabulary_prompt(), 7);
  CHECK(vocab_prompt.find("{max_names}") == std::string::npos);
  CHECK(vocab_prompt.find("at most 7 names") != std::string::npos);

  SceneVocabulary vocabulary;
  vocabulary.insert(cat("chair"));
  vocabulary.insert(cat("coffee table"));
  const std::string group_prompt =
      render_grouping_prompt(default_grouping_prompt(), vocabulary);
  CHECK(group_prompt.find("{vocabulary}") == std::string::npos);
  CHECK(group_prompt.find("chair, coffee table") != std::string::npos);

  CHECK(render_vocabulary_prompt("count={max_names}/{max_names}", 3) == "count=3/3");
}

TEST_CASE("request helpers attach images and annotate failures") {
  TempDir dir("req");
  const auto path = dir.path() / "vocab.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "bed, nightstand";
  }
  FixtureChatClient fixture(path);
  CHECK(request_vocabulary(fixture, "file://frame0.png", "prompt") == "bed, nightstand");

  SceneVocabulary vocabulary;
  vocabulary.insert(cat("bed"));
  CHECK(request_grouping(fixture, vocabulary, default_grouping_prompt()) ==
        "bed, nightstand");
  CHECK(fixture.calls() == 2);

  // ProviderError gains the request kind as a prefix.
  auto transport = std::make_unique<FakeTransport>(
      std::vector<HttpResult>{HttpResult{400, "bad request", ""}});
  HttpChatClient failing(fast_options(), std::move(transport));
  try {
    request_vocabulary(failing, "file://frame0.png", "prompt");
    FAIL("expected ProviderError");
  } catch (const ProviderError& e) {
    CHECK(std::string(e.what()).find("vocabulary request:") == 0);
  }
}

TEST_CASE("offline tests never construct the real transport") {
  CHECK(default_transport_constructions() == 0);
}

}  // namespace
}  // namespace ovlift
