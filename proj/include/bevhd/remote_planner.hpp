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

#ifndef BEVHD__REMOTE_PLANNER_HPP_
#define BEVHD__REMOTE_PLANNER_HPP_

#include <memory>
#include <semaphore>
#include <string>

#include "bevhd/planners.hpp"
#include "bevhd/wire_protocol.hpp"

namespace bevhd
{

/**
 * @brief JSON-over-HTTP client for `POST /v1/plan`.
 *
 * Thread-safe. At most `max_in_flight` requests are outstanding at once;
 * further callers block. Transport failures and timeouts are retried
 * `retries` times with exponential backoff starting at `backoff_s`.
 */
class RemotePlannerClient
{
public:
  explicit RemotePlannerClient(RemoteOptions options);

  PlanResponse plan(const PlanRequest & req);
  const RemoteOptions & options() const { return options_; }

private:
  PlanResponse attempt(const std::string & body, const PlanRequest & req);

  RemoteOptions options_;
  std::string scheme_host_port_;
  std::string path_;
  std::unique_ptr<std::counting_semaphore<1024>> in_flight_;
};

/// One-off convenience wrapper around RemotePlannerClient.
PlanResponse plan_remote(
  const std::string & endpoint, const PlanRequest & req, double timeout_s, int retries);

}  // namespace bevhd

#endif  // BEVHD__REMOTE_PLANNER_HPP_
