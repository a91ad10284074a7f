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

#include "bevhd/remote_planner.hpp"

#include <algorithm>
#include <chrono>
#include <regex>
#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace bevhd
{

namespace
{

using Kind = PlannerError::Kind;
using Clock = std::chrono::steady_clock;

/// Releases a semaphore slot on scope exit.
class SlotGuard
{
public:
  explicit SlotGuard(std::counting_semaphore<1024> & sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard &) = delete;
  SlotGuard & operator=(const SlotGuard &) = delete;

private:
  std::counting_semaphore<1024> & sem_;
};

}  // namespace

RemotePlannerClient::RemotePlannerClient(RemoteOptions options)
: options_(std::move(options))
{
  static const std::regex url_re(R"(^(http)://([^/:]+)(:([0-9]{1,5}))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(options_.endpoint, m, url_re)) {
    throw std::invalid_argument("remote planner: endpoint must look like http://host[:port][/path]");
  }
  scheme_host_port_ = m[1].str() + "://" + m[2].str() + (m[3].matched ? m[3].str() : "");
  std::string base = m[5].matched ? m[5].str() : "";
  while (!base.empty() && base.back() == '/') {
    base.pop_back();
  }
  path_ = base + kPlanPath;
  if (!(options_.timeout_s > 0.0)) {
    throw std::invalid_argument("remote planner: timeout must be positive");
  }
  if (options_.retries < 0) {
    throw std::invalid_argument("remote planner: retries must be >= 0");
  }
  const int slots = std::clamp(options_.max_in_flight, 1, 1024);
  in_flight_ = std::make_unique<std::counting_semaphore<1024>>(slots);
}

PlanResponse RemotePlannerClient::attempt(const std::string & body, const PlanRequest & req)
{
  httplib::Client cli(scheme_host_port_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
    std::chrono::duration<double>(options_.timeout_s));
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);

  const auto started = Clock::now();
  auto res = cli.Post(path_, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const double elapsed = std::chrono::duration<double>(Clock::now() - started).count();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
      (err == httplib::Error::Read && elapsed >= 0.9 * options_.timeout_s);
    throw PlannerError(
            timed_out ? Kind::timeout : Kind::transport,
            "remote planner " + options_.endpoint + ": " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw PlannerError(
            Kind::http_status,
            "remote planner returned HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  return response_from_json(res->body, req.horizon_steps, req.vocab);
}

PlanResponse RemotePlannerClient::plan(const PlanRequest & req)
{
  const std::string body = request_to_json(req);
  SlotGuard slot(*in_flight_);
  double backoff = options_.backoff_s;
  for (int attempt_no = 0;; ++attempt_no) {
    try {
      return attempt(body, req);
    } catch (const PlannerError & e) {
      const bool retryable = e.kind() == Kind::transport || e.kind() == Kind::timeout;
      if (!retryable || attempt_no >= options_.retries) {
        throw;
      }
    }
    std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
    backoff *= 2.0;
  }
}

PlanResponse plan_remote(
  const std::string & endpoint, const PlanRequest & req, double timeout_s, int retries)
{
  RemoteOptions opts;
  opts.endpoint = endpoint;
  opts.timeout_s = timeout_s;
  opts.retries = retries;
  RemotePlannerClient client(opts);
  return client.plan(req);
}

}  // namespace bevhd
