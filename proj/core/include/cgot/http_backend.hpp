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

#pragma once

#include <chrono>
#include <string>

#include "cgot/llm_backend.hpp"

namespace cgot {

struct HttpBackendConfig {
  std::string baseUrl;  // e.g. "http://localhost:8000/v1"
  std::string model;
  std::string apiKey;
  std::chrono::milliseconds timeout{30000};
  int retries = 2;  // extra attempts after the first

  /// Reads CGOT_LLM_BASE_URL, CGOT_LLM_MODEL and CGOT_LLM_API_KEY.
  /// Throws InvalidInput when the base URL is missing.
  static HttpBackendConfig from_env();
};

/// Chat-completions client. The model is asked to answer with THOUGHT: and
/// ACTION: lines; usage comes from the provider's report. Network failures,
/// timeouts and replies without an action are retried, then surface as
/// BackendUnavailable.
class HttpBackend final : public InferenceBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  InferenceResponse infer(const InferenceRequest& request) override;
  std::string_view name() const override { return "http"; }

  const HttpBackendConfig& config() const { return config_; }

 private:
  InferenceResponse attempt(const InferenceRequest& request) const;

  HttpBackendConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // endpoint path, e.g. /v1/chat/completions
};

/// Instructions sent as the system message.
std::string_view http_system_prompt();

}  // namespace cgot
