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

#include "bevhd/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace bevhd
{

namespace
{

using NumberList = std::vector<double>;
using Value = std::variant<std::string, double, bool, NumberList>;

struct Entry
{
  Value value;
  int line;
};

// section -> key -> value
using Document = std::map<std::string, std::map<std::string, Entry>>;

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_key_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Parser
{
public:
  Parser(std::string_view origin, int line) : origin_(origin), line_(line) {}

  [[noreturn]] void fail(const std::string & msg) const
  {
    throw ConfigError(std::string(origin_) + ":" + std::to_string(line_) + ": " + msg);
  }

  double number(std::string_view s) const
  {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
      s.remove_prefix(1);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail("invalid value '" + std::string(s) + "'");
    }
    return v;
  }

  Value value(std::string_view s) const
  {
    s = trim(s);
    if (s.empty()) {
      fail("missing value");
    }
    if (s.front() == '"') {
      if (s.size() < 2 || s.back() != '"') {
        fail("unterminated string");
      }
      std::string out;
      for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        char c = s[i];
        if (c == '\\') {
          if (i + 2 >= s.size()) {
            fail("dangling escape");
          }
          c = s[++i];
          if (c != '\\' && c != '"') {
            fail("unsupported escape");
          }
        } else if (c == '"') {
          fail("unexpected quote inside string");
        }
        out.push_back(c);
      }
      return out;
    }
    if (s == "true") {
      return true;
    }
    if (s == "false") {
      return false;
    }
    if (s.front() == '[') {
      if (s.back() != ']') {
        fail("unterminated array");
      }
      NumberList list;
      std::string_view body = trim(s.substr(1, s.size() - 2));
      while (!body.empty()) {
        const auto comma = body.find(',');
        list.push_back(number(body.substr(0, comma)));
        if (comma == std::string_view::npos) {
          break;
        }
        body = trim(body.substr(comma + 1));
        if (body.empty()) {
          break;  // trailing comma
        }
      }
      return list;
    }
    return number(s);
  }

private:
  std::string_view origin_;
  int line_;
};

std::string_view strip_comment(std::string_view line)
{
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

Document parse_document(std::string_view text, std::string_view origin)
{
  Document doc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const Parser p(origin, line_no);
    const auto line = trim(strip_comment(raw));
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        p.fail("malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty() || !std::all_of(section.begin(), section.end(), is_key_char)) {
        p.fail("invalid section name");
      }
      static const std::set<std::string> known{"grid", "vocab", "style", "planner", "eval", "serve"};
      if (known.count(section) == 0) {
        p.fail("unknown section [" + section + "]");
      }
      if (doc.count(section) != 0) {
        p.fail("duplicate section [" + section + "]");
      }
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      p.fail("expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty() || !std::all_of(key.begin(), key.end(), is_key_char)) {
      p.fail("invalid key '" + key + "'");
    }
    if (section.empty()) {
      p.fail("key '" + key + "' outside of a section");
    }
    auto & keys = doc[section];
    if (keys.count(key) != 0) {
      p.fail("duplicate key '" + key + "'");
    }
    keys.emplace(key, Entry{p.value(line.substr(eq + 1)), line_no});
  }
  return doc;
}

class Section
{
public:
  Section(
    const std::map<std::string, Entry> & entries, std::string name, std::string_view origin)
  : entries_(entries), name_(std::move(name)), origin_(origin)
  {
  }

  template<class Fn>
  void with(const char * key, Fn && fn)
  {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      return;
    }
    used_.push_back(key);
    current_ = &it->second;
    fn(it->second.value);
  }

  [[noreturn]] void fail(const std::string & msg) const
  {
    const int line = current_ ? current_->line : 0;
    throw ConfigError(
      std::string(origin_) + ":" + std::to_string(line) + ": [" + name_ + "] " + msg);
  }

  double number(const char * key, const Value & v) const
  {
    if (const auto * d = std::get_if<double>(&v)) {
      return *d;
    }
    fail(std::string(key) + " must be a number");
  }

  int integer(const char * key, const Value & v) const
  {
    const double d = number(key, v);
    if (d != std::floor(d) || std::abs(d) > 2.0e9) {
      fail(std::string(key) + " must be an integer");
    }
    return static_cast<int>(d);
  }

  std::string string(const char * key, const Value & v) const
  {
    if (const auto * s = std::get_if<std::string>(&v)) {
      return *s;
    }
    fail(std::string(key) + " must be a string");
  }

  bool boolean(const char * key, const Value & v) const
  {
    if (const auto * b = std::get_if<bool>(&v)) {
      return *b;
    }
    fail(std::string(key) + " must be true or false");
  }

  NumberList list(const char * key, const Value & v) const
  {
    if (const auto * l = std::get_if<NumberList>(&v)) {
      return *l;
    }
    fail(std::string(key) + " must be an array of numbers");
  }

  Rgb color(const char * key, const Value & v) const
  {
    const auto l = list(key, v);
    if (l.size() != 3) {
      fail(std::string(key) + " must have three components");
    }
    std::array<std::uint8_t, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (l[i] != std::floor(l[i]) || l[i] < 0.0 || l[i] > 255.0) {
        fail(std::string(key) + " components must be integers in [0, 255]");
      }
      c[i] = static_cast<std::uint8_t>(l[i]);
    }
    return {c[0], c[1], c[2]};
  }

  void reject_unused() const
  {
    for (const auto & [key, entry] : entries_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw ConfigError(
          std::string(origin_) + ":" + std::to_string(entry.line) + ": unknown key '" + key +
          "' in [" + name_ + "]");
      }
    }
  }

private:
  const std::map<std::string, Entry> & entries_;
  std::string name_;
  std::string_view origin_;
  std::vector<std::string> used_;
  const Entry * current_{nullptr};
};

template<class Fn>
void checked(Fn && fn, const char * what)
{
  try {
    fn();
  } catch (const std::invalid_argument & e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

FailurePolicy failure_policy_from_string(std::string_view name)
{
  if (name == "abort") {
    return FailurePolicy::abort;
  }
  if (name == "skip") {
    return FailurePolicy::skip;
  }
  throw std::invalid_argument("unknown failure policy: " + std::string(name));
}

void Config::validate() const
{
  checked([&] { grid.validate(); }, "[grid]");
  checked([&] { vocab.validate(); }, "[vocab]");
  checked([&] { style.validate(); }, "[style]");
  checked([&] { ego_box.validate(); }, "[eval]");
  if (workers < 1) {
    throw ConfigError("[eval]: workers must be >= 1");
  }
  if (channels < 1) {
    throw ConfigError("[eval]: channels must be >= 1");
  }
  const auto & r = planner.remote;
  if (!(r.timeout_s > 0.0) || r.retries < 0 || r.max_in_flight < 1 || !(r.backoff_s >= 0.0)) {
    throw ConfigError(
      "[planner]: timeout_s > 0, retries >= 0, max_in_flight >= 1 and backoff_s >= 0 required");
  }
  if (!std::isfinite(planner.mock_offset.x) || !std::isfinite(planner.mock_offset.y)) {
    throw ConfigError("[planner]: mock_offset must be finite");
  }
  if (serve.port < 0 || serve.port > 65535) {
    throw ConfigError("[serve]: port must be in [0, 65535]");
  }
  if (serve.delay_ms < 0) {
    throw ConfigError("[serve]: delay_ms must be >= 0");
  }
  for (auto t : serve.tokens) {
    if (t < 0 || t >= vocab.vocab_size()) {
      throw ConfigError("[serve]: token " + std::to_string(t) + " outside the vocabulary");
    }
  }
}

Config parse_config(std::string_view text, std::string_view origin)
{
  const Document doc = parse_document(text, origin);
  Config cfg;
  for (const auto & [name, entries] : doc) {
    Section s(entries, name, origin);
    if (name == "grid") {
      s.with("height_cells", [&](const Value & v) { cfg.grid.height_cells = s.integer("height_cells", v); });
      s.with("width_cells", [&](const Value & v) { cfg.grid.width_cells = s.integer("width_cells", v); });
      s.with("extent", [&](const Value & v) { cfg.grid.extent = s.number("extent", v); });
    } else if (name == "vocab") {
      s.with("bins_per_axis", [&](const Value & v) { cfg.vocab.bins_per_axis = s.integer("bins_per_axis", v); });
      s.with("range", [&](const Value & v) { cfg.vocab.range = s.number("range", v); });
    } else if (name == "style") {
      const char * kinds[] = {"centerline", "lane_divider", "road_boundary", "crosswalk"};
      for (std::size_t k = 0; k < 4; ++k) {
        s.with(kinds[k], [&](const Value & v) { cfg.style.kind_colors[k] = s.color(kinds[k], v); });
      }
      s.with("predicted", [&](const Value & v) { cfg.style.predicted = s.color("predicted", v); });
      s.with("ground_truth", [&](const Value & v) { cfg.style.ground_truth = s.color("ground_truth", v); });
      s.with("agent_box", [&](const Value & v) { cfg.style.agent_box = s.color("agent_box", v); });
      s.with("thickness", [&](const Value & v) { cfg.style.thickness = s.integer("thickness", v); });
    } else if (name == "planner") {
      auto & r = cfg.planner.remote;
      s.with("kind", [&](const Value & v) {
          try {
            cfg.planner.kind = planner_kind_from_string(s.string("kind", v));
          } catch (const std::invalid_argument & e) {
            s.fail(e.what());
          }
        });
      s.with("endpoint", [&](const Value & v) { r.endpoint = s.string("endpoint", v); });
      s.with("timeout_s", [&](const Value & v) { r.timeout_s = s.number("timeout_s", v); });
      s.with("retries", [&](const Value & v) { r.retries = s.integer("retries", v); });
      s.with("max_in_flight", [&](const Value & v) { r.max_in_flight = s.integer("max_in_flight", v); });
      s.with("backoff_s", [&](const Value & v) { r.backoff_s = s.number("backoff_s", v); });
      s.with("mock_offset", [&](const Value & v) {
          const auto l = s.list("mock_offset", v);
          if (l.size() != 2) {
            s.fail("mock_offset must be [x, y]");
          }
          cfg.planner.mock_offset = {l[0], l[1]};
        });
    } else if (name == "eval") {
      s.with("ego_length", [&](const Value & v) { cfg.ego_box.length = s.number("ego_length", v); });
      s.with("ego_width", [&](const Value & v) { cfg.ego_box.width = s.number("ego_width", v); });
      s.with("failure_policy", [&](const Value & v) {
          try {
            cfg.failure_policy = failure_policy_from_string(s.string("failure_policy", v));
          } catch (const std::invalid_argument & e) {
            s.fail(e.what());
          }
        });
      s.with("output_dir", [&](const Value & v) { cfg.output_dir = s.string("output_dir", v); });
      s.with("workers", [&](const Value & v) { cfg.workers = s.integer("workers", v); });
      s.with("channels", [&](const Value & v) { cfg.channels = s.integer("channels", v); });
      s.with("seed", [&](const Value & v) {
          const int seed = s.integer("seed", v);
          if (seed < 0) {
            s.fail("seed must be >= 0");
          }
          cfg.seed = static_cast<std::uint64_t>(seed);
        });
      s.with("route_through_codec", [&](const Value & v) { cfg.route_through_codec = s.boolean("route_through_codec", v); });
      s.with("agent_boxes", [&](const Value & v) { cfg.agent_boxes = s.boolean("agent_boxes", v); });
      s.with("record_latency", [&](const Value & v) { cfg.record_latency = s.boolean("record_latency", v); });
    } else if (name == "serve") {
      s.with("policy", [&](const Value & v) {
          try {
            cfg.serve.policy = mock_policy_from_string(s.string("policy", v));
          } catch (const std::invalid_argument & e) {
            s.fail(e.what());
          }
        });
      s.with("tokens", [&](const Value & v) {
          cfg.serve.tokens.clear();
          for (double t : s.list("tokens", v)) {
            if (t != std::floor(t)) {
              s.fail("tokens must be integers");
            }
            cfg.serve.tokens.push_back(static_cast<std::int64_t>(t));
          }
        });
      s.with("host", [&](const Value & v) { cfg.serve.host = s.string("host", v); });
      s.with("port", [&](const Value & v) { cfg.serve.port = s.integer("port", v); });
      s.with("delay_ms", [&](const Value & v) { cfg.serve.delay_ms = s.integer("delay_ms", v); });
    } else {
      throw ConfigError(std::string(origin) + ": unknown section [" + name + "]");
    }
    s.reject_unused();
  }
  cfg.validate();
  return cfg;
}

Config load_config(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::optional<std::string> resolve_config_path(
  const std::optional<std::string> & flag, const char * env_value)
{
  if (flag && !flag->empty()) {
    return flag;
  }
  if (env_value != nullptr && *env_value != '\0') {
    return std::string(env_value);
  }
  return std::nullopt;
}

EvalConfig make_eval_config(const Config & config)
{
  EvalConfig ec;
  ec.grid = config.grid;
  ec.vocab = config.vocab;
  ec.style = config.style;
  ec.ego_box = config.ego_box;
  ec.failure_policy = config.failure_policy;
  ec.workers = config.workers;
  ec.route_through_codec = config.route_through_codec;
  ec.channels = config.channels;
  ec.seed = config.seed;
  ec.agent_boxes = config.agent_boxes;
  ec.record_latency = config.record_latency.value_or(config.planner.kind == PlannerKind::remote);
  return ec;
}

}  // namespace bevhd
