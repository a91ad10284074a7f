// Copyright 2026 The bevhd Authors
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

#ifndef BEVHD__MOCK_SERVER_HPP_
#define BEVHD__MOCK_SERVER_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bevhd/scene.hpp"

namespace bevhd
{

enum class MockPolicy { fixed_tokens, echo_oracle, constant_velocity };

/// Throws std::invalid_argument for unknown names.
MockPolicy mock_policy_from_string(std::string_view name);

struct MockServerOptions
{
  MockPolicy policy{MockPolicy::fixed_tokens};
  std::vector<std::int64_t> fixed_tokens;
  /// Sidecar scenarios for echo_oracle, looked up by request meta.scenario.
  std::map<std::string, Scenario> scenarios;
  /// Artificial latency before answering.
  std::chrono::milliseconds delay{0};
};

struct MockReply
{
  int status{200};
  std::string body;
};

/// Request handling without the transport; the server is a thin wrapper.
MockReply handle_plan_request(const MockServerOptions & options, std::string_view body);

/**
 * @brief Stateless HTTP server speaking the plan wire protocol.
 *
 * Requests are served concurrently from a thread pool.
 */
class MockServer
{
public:
  explicit MockServer(MockServerOptions options);
  ~MockServer();
  MockServer(const MockServer &) = delete;
  MockServer & operator=(const MockServer &) = delete;

  /// Binds and starts serving in the background; port 0 picks a free port.
  /// Returns the bound port. Throws std::runtime_error if binding fails.
  int start(const std::string & host, int port);
  void stop();
  bool running() const;
  std::string url() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bevhd

#endif  // BEVHD__MOCK_SERVER_HPP_
