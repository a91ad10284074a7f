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

#include "bevhd/mock_server.hpp"

#include <stdexcept>

#include <httplib.h>

#include "bevhd/planners.hpp"
#include "bevhd/waypoint_codec.hpp"
#include "bevhd/wire_protocol.hpp"

namespace bevhd
{

MockPolicy mock_policy_from_string(std::string_view name)
{
  if (name == "fixed" || name == "fixed_tokens" || name == "fixed-tokens") {
    return MockPolicy::fixed_tokens;
  }
  if (name == "echo_oracle" || name == "echo-oracle") {
    return MockPolicy::echo_oracle;
  }
  if (name == "constant_velocity" || name == "constant-velocity") {
    return MockPolicy::constant_velocity;
  }
  throw std::invalid_argument("unknown mock policy: " + std::string(name));
}

MockReply handle_plan_request(const MockServerOptions & options, std::string_view body)
{
  PlanRequest req;
  try {
    req = request_from_json(body);
  } catch (const std::exception & e) {
    return {400, error_to_json(e.what())};
  }

  try {
    switch (options.policy) {
      case MockPolicy::fixed_tokens: {
          PlanResponse resp{WaypointTokens{options.fixed_tokens}, std::nullopt};
          return {200, response_to_json(resp)};
        }
      case MockPolicy::echo_oracle: {
          if (!req.meta || !req.meta->scenario || !req.meta->frame) {
            return {400, error_to_json("echo-oracle needs meta.scenario and meta.frame")};
          }
          const auto it = options.scenarios.find(*req.meta->scenario);
          if (it == options.scenarios.end()) {
            return {400, error_to_json("unknown scenario '" + *req.meta->scenario + "'")};
          }
          if (*req.meta->frame < 0) {
            return {400, error_to_json("meta.frame must be >= 0")};
          }
          const Trajectory gt = ground_truth_trajectory(
            it->second, static_cast<std::size_t>(*req.meta->frame), req.horizon_steps);
          return {200, response_to_json({encode(gt, req.vocab).tokens, std::nullopt})};
        }
      case MockPolicy::constant_velocity: {
          if (!req.meta || !req.meta->ego_speed || *req.meta->ego_speed < 0.0) {
            return {400, error_to_json("constant-velocity needs a non-negative meta.ego_speed")};
          }
          Frame f;
          f.ego_speed = *req.meta->ego_speed;
          const Trajectory t = plan_constant_velocity(f, req.horizon_steps);
          return {200, response_to_json({encode(t, req.vocab).tokens, std::nullopt})};
        }
    }
  } catch (const std::out_of_range & e) {
    return {400, error_to_json(e.what())};
  } catch (const std::exception & e) {
    return {500, error_to_json(e.what())};
  }
  return {500, error_to_json("unhandled policy")};
}

struct MockServer::Impl
{
  MockServerOptions options;
  httplib::Server server;
  std::thread worker;
  std::string host;
  int port{0};
};

MockServer::MockServer(MockServerOptions options)
: impl_(std::make_unique<Impl>())
{
  impl_->options = std::move(options);
  // SO_REUSEADDR only: a second server on an occupied port must fail to bind
  impl_->server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
  impl_->server.Post(
    kPlanPath, [this](const httplib::Request & req, httplib::Response & res) {
      if (impl_->options.delay.count() > 0) {
        std::this_thread::sleep_for(impl_->options.delay);
      }
      const MockReply reply = handle_plan_request(impl_->options, req.body);
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
}

MockServer::~MockServer() { stop(); }

int MockServer::start(const std::string & host, int port)
{
  if (impl_->worker.joinable()) {
    throw std::runtime_error("mock server already running");
  }
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) {
    throw std::runtime_error("cannot bind mock server to " + host + ":" + std::to_string(port));
  }
  impl_->host = host;
  impl_->port = bound;
  impl_->worker = std::thread([this] {impl_->server.listen_after_bind();});
  impl_->server.wait_until_ready();
  return bound;
}

void MockServer::stop()
{
  if (impl_->worker.joinable()) {
    impl_->server.stop();
    impl_->worker.join();
  }
}

bool MockServer::running() const { return impl_->server.is_running(); }

std::string MockServer::url() const
{
  return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

}  // namespace bevhd
