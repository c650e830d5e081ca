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

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace ovlift {
namespace {

using nlohmann::json;

std::atomic<int> g_transport_constructions{0};

bool retryable_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status < 600);
}

std::string replace_all(std::string text, const std::string& needle,
                        const std::string& replacement) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
  return text;
}

class HttplibTransport final : public HttpTransport {
 public:
  HttplibTransport() { ++g_transport_constructions; }

  HttpResult post(const std::string& url,
                  const std::vector<std::pair<std::string, std::string>>& headers,
                  const std::string& body, std::chrono::milliseconds timeout) override {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
      return HttpResult{0, "", "endpoint is not an absolute URL: " + url};
    const std::size_t path_start = url.find('/', scheme_end + 3);
    const std::string base =
        path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers header_map;
    for (const auto& [key, value] : headers) header_map.emplace(key, value);

    const httplib::Result result = client.Post(path, header_map, body, "application/json");
    if (!result) return HttpResult{0, "", httplib::to_string(result.error())};
    return HttpResult{result->status, result->body, ""};
  }
};

}  // namespace

FixtureChatClient::FixtureChatClient(std::filesystem::path fixture)
    : fixture_(std::move(fixture)) {}

std::string FixtureChatClient::complete(const ChatRequest&) {
  ++calls_;
  std::ifstream in(fixture_, std::ios::binary);
  if (!in) throw ValidationError("cannot open fixture: " + fixture_.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

std::unique_ptr<HttpTransport> make_default_transport() {
  return std::make_unique<HttplibTransport>();
}

int default_transport_constructions() { return g_transport_constructions.load(); }

HttpChatClient::HttpChatClient(LiveClientOptions options,
                               std::unique_ptr<HttpTransport> transport)
    : options_(std::move(options)),
      transport_(transport ? std::move(transport) : make_default_transport()) {
  if (options_.endpoint.empty()) throw ConfigError("live client: endpoint required");
  if (options_.max_attempts < 1) throw ConfigError("live client: max_attempts must be >= 1");
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  const std::string body = build_chat_body(request, options_.model);
  std::vector<std::pair<std::string, std::string>> headers;
  if (!options_.api_key.empty())
    headers.emplace_back("Authorization", "Bearer " + options_.api_key);

  std::string last_failure;
  std::chrono::milliseconds backoff = options_.initial_backoff;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    ++attempts_made_;
    const HttpResult result =
        transport_->post(options_.endpoint, headers, body, options_.timeout);
    if (result.error.empty() && result.status >= 200 && result.status < 300)
      return parse_chat_response(result.body);

    if (!result.error.empty()) {
      last_failure = "transport: " + result.error;
    } else if (retryable_status(result.status)) {
      last_failure = "status " + std::to_string(result.status);
    } else {
      throw ProviderError("provider returned status " + std::to_string(result.status));
    }
    if (attempt < options_.max_attempts && backoff.count() > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw ProviderError("provider unreachable after " + std::to_string(options_.max_attempts) +
                      " attempts (" + last_failure + ")");
}

std::string build_chat_body(const ChatRequest& request, const std::string& fallback_model) {
  json body;
  body["model"] = request.model.empty() ? fallback_model : request.model;
  body["messages"] = json::array();
  for (const ChatMessage& message : request.messages) {
    json entry;
    entry["role"] = message.role;
    if (message.image_ref) {
      entry["content"] = json::array(
          {json{{"type", "text"}, {"text", message.text}},
           json{{"type", "image_url"}, {"image_url", json{{"url", *message.image_ref}}}}});
    } else {
      entry["content"] = message.text;
    }
    body["messages"].push_back(std::move(entry));
  }
  return body.dump();
}

std::string parse_chat_response(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed provider response: ") + e.what());
  }
  try {
    const json& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {
      std::string text;
      for (const json& part : content)
        if (part.value("type", "") == "text") text += part.value("text", "");
      return text;
    }
    throw ProviderError("provider response content has unsupported type");
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed provider response: ") + e.what());
  }
}

const std::string& default_vocabulary_prompt() {
  static const std::string prompt =
      "You are labeling one indoor photo. List the distinct object categories you can "
      "see. Reply with a single line of lowercase category names separated by commas, "
      "most prominent first, at most {max_names} names. Use short common nouns; no "
      "counts, no colors, no sentences.";
  return prompt;
}

const std::string& default_grouping_prompt() {
  static const std::string prompt =
      "Here is a list of object category names from one indoor scene: {vocabulary}. "
      "Different names in this list may describe the same physical object. Group such "
      "names. Reply with one line per group, formatted exactly as "
      "group_name: [name_a, name_b]. Only output groups of two or more names, only use "
      "names from the list verbatim, and print nothing else.";
  return prompt;
}

std::string render_vocabulary_prompt(const std::string& prompt_template, int max_names) {
  return replace_all(prompt_template, "{max_names}", std::to_string(max_names));
}

std::string render_grouping_prompt(const std::string& prompt_template,
                                   const SceneVocabulary& vocabulary) {
  std::string joined;
  for (const Category& category : vocabulary.categories()) {
    if (!joined.empty()) joined += ", ";
    joined += category.str();
  }
  return replace_all(prompt_template, "{vocabulary}", joined);
}

std::string request_vocabulary(ChatClient& client, const std::string& image_ref,
                               const std::string& prompt) {
  ChatRequest request;
  request.messages.push_back(ChatMessage{"user", prompt, image_ref});
  try {
    return client.complete(request);
  } catch (const ProviderError& e) {
    throw ProviderError(std::string("vocabulary request: ") + e.what());
  }
}

std::string request_grouping(ChatClient& client, const SceneVocabulary& vocabulary,
                             const std::string& prompt_template) {
  ChatRequest request;
  request.messages.push_back(
      ChatMessage{"user", render_grouping_prompt(prompt_template, vocabulary), std::nullopt});
  try {
    return client.complete(request);
  } catch (const ProviderError& e) {
    throw ProviderError(std::string("grouping request: ") + e.what());
  }
}

}  // namespace ovlift
