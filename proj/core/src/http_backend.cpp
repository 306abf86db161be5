// Copyright 2026 The CGoT Authors
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

#include "cgot/http_backend.hpp"

#include <cstdlib>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cgot/error.hpp"

namespace cgot {
namespace {

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value == nullptr ? std::string() : std::string(value);
}

}  // namespace

std::string_view http_system_prompt() {
  return "You steer one agent of a vehicle-robot team in an office park. Read the sections of "
         "the user message, reason briefly, then answer with lines of the form\n"
         "THOUGHT: <one reasoning step>\n"
         "ACTION: <one of Move(site), PickupPackage(p), DropPackage(p), CarryInside(p,site), "
         "Clean(site), Combine(a,b), Split(c), Wait>\n"
         "Emit at least one ACTION line. Other lines are ignored.";
}

HttpBackendConfig HttpBackendConfig::from_env() {
  HttpBackendConfig config;
  config.baseUrl = env_or_empty("CGOT_LLM_BASE_URL");
  config.model = env_or_empty("CGOT_LLM_MODEL");
  config.apiKey = env_or_empty("CGOT_LLM_API_KEY");
  if (config.baseUrl.empty()) {
    throw Error(ErrorCode::InvalidInput, "CGOT_LLM_BASE_URL is not set");
  }
  return config;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  std::string url = config_.baseUrl;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidInput, "base URL needs a scheme: " + config_.baseUrl);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = (path_start == std::string::npos ? std::string() : url.substr(path_start)) +
          "/chat/completions";
}

InferenceResponse HttpBackend::infer(const InferenceRequest& request) {
  std::string last_error;
  for (int attempt_index = 0; attempt_index <= config_.retries; ++attempt_index) {
    try {
      return attempt(request);
    } catch (const Error& error) {
      last_error = error.what();
    }
  }
  throw Error(ErrorCode::BackendUnavailable,
              "inference for " + request.agentId + " failed after " +
                  std::to_string(config_.retries + 1) + " attempts: " + last_error);
}

InferenceResponse HttpBackend::attempt(const InferenceRequest& request) const {
  httplib::Client client(origin_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers headers;
  if (!config_.apiKey.empty()) headers.emplace("Authorization", "Bearer " + config_.apiKey);

  const nlohmann::json body = {
      {"model", config_.model},
      {"messages",
       nlohmann::json::array({{{"role", "system"}, {"content", std::string(http_system_prompt())}},
                              {{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", 0},
  };
  const auto result = client.Post(path_, headers, body.dump(), "application/json");
  if (!result) {
    throw Error(ErrorCode::BackendUnavailable, "transport error: " + httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw Error(ErrorCode::BackendUnavailable, "HTTP status " + std::to_string(result->status));
  }

  const auto reply = nlohmann::json::parse(result->body, nullptr, false);
  if (reply.is_discarded()) throw Error(ErrorCode::BackendUnavailable, "response is not JSON");
  const auto* content = &reply;
  try {
    content = &reply.at("choices").at(0).at("message").at("content");
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::BackendUnavailable, "response lacks choices[0].message.content");
  }
  if (!content->is_string()) throw Error(ErrorCode::BackendUnavailable, "content is not text");

  InferenceResponse response = parse_completion(content->get<std::string>());
  if (response.actions.empty()) {
    throw Error(ErrorCode::BackendUnavailable, "no ACTION line in response");
  }
  if (reply.contains("usage") && reply["usage"].is_object()) {
    const auto& usage = reply["usage"];
    response.usage.promptTokens = usage.value("prompt_tokens", std::uint64_t{0});
    response.usage.completionTokens = usage.value("completion_tokens", std::uint64_t{0});
  } else {
    // Servers without usage reporting get the same proxy as the scripted oracle.
    response.usage.promptTokens = count_tokens_proxy(request.prompt);
    response.usage.completionTokens = count_tokens_proxy(content->get<std::string>());
  }
  return response;
}

}  // namespace cgot
