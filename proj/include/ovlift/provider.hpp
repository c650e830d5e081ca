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

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ovlift/error.hpp"
#include "ovlift/vocabulary.hpp"

namespace ovlift {

struct ChatMessage {
  std::string role = "user";
  std::string text;
  std::optional<std::string> image_ref;  // URL or data URI attached to the message
};

struct ChatRequest {
  std::string model;  // may be empty; live clients then use their configured model
  std::vector<ChatMessage> messages;
};

// A source of chat completions: either a recorded fixture or a live service.
class ChatClient {
 public:
  virtual ~ChatClient() = default;

  // Returns the raw completion text. Throws ProviderError on remote failure
  // and ValidationError when a fixture cannot be read.
  virtual std::string complete(const ChatRequest& request) = 0;
};

// Replays a recorded response from a file. Never touches the network.
class FixtureChatClient final : public ChatClient {
 public:
  explicit FixtureChatClient(std::filesystem::path fixture);
  std::string complete(const ChatRequest& request) override;

  int calls() const { return calls_; }

 private:
  std::filesystem::path fixture_;
  int calls_ = 0;
};

// Minimal HTTP POST abstraction so live transport can be faked in tests.
struct HttpResult {
  int status = 0;
  std::string body;
  std::string error;  // non-empty marks a transport-level failure
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResult post(const std::string& url,
                          const std::vector<std::pair<std::string, std::string>>& headers,
                          const std::string& body, std::chrono::milliseconds timeout) = 0;
};

// Real transport backed by cpp-httplib.
std::unique_ptr<HttpTransport> make_default_transport();

// Count of real transports constructed in this process; lets offline tests
// prove they never opened a network path.
int default_transport_constructions();

struct LiveClientOptions {
  std::string endpoint;  // full URL of the chat-completions resource
  std::string model;
  std::string api_key;   // sent as "Authorization: Bearer <key>" when non-empty
  int max_attempts = 3;
  std::chrono::milliseconds timeout{60000};
  std::chrono::milliseconds initial_backoff{500};  // doubled after each retryable failure
};

// Live chat-completions client with bounded retries. Retries transport
// failures and 408/429/5xx statuses; other non-success statuses fail
// immediately. Exhausting the budget raises ProviderError.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(LiveClientOptions options,
                          std::unique_ptr<HttpTransport> transport = nullptr);
  std::string complete(const ChatRequest& request) override;

  int attempts_made() const { return attempts_made_; }

 private:
  LiveClientOptions options_;
  std::unique_ptr<HttpTransport> transport_;
  int attempts_made_ = 0;
};

// Request body / response parsing for the chat wire format; exposed for
// tests. parse_chat_response throws ProviderError on malformed bodies.
std::string build_chat_body(const ChatRequest& request, const std::string& fallback_model);
std::string parse_chat_response(const std::string& body);

// Built-in prompt texts. "{max_names}" and "{vocabulary}" are substituted by
// the render helpers.
const std::string& default_vocabulary_prompt();
const std::string& default_grouping_prompt();
std::string render_vocabulary_prompt(const std::string& prompt_template, int max_names);
std::string render_grouping_prompt(const std::string& prompt_template,
                                   const SceneVocabulary& vocabulary);

// One image -> raw proposal line(s) for that view.
std::string request_vocabulary(ChatClient& client, const std::string& image_ref,
                               const std::string& prompt);

// Scene vocabulary -> raw grouping text.
std::string request_grouping(ChatClient& client, const SceneVocabulary& vocabulary,
                             const std::string& prompt_template);

}  // namespace ovlift
