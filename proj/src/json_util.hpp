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

#ifndef BEVHD__JSON_UTIL_HPP_
#define BEVHD__JSON_UTIL_HPP_

#include <cmath>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bevhd/scene.hpp"

namespace bevhd::json_util
{

using ordered_json = nlohmann::ordered_json;

inline const ordered_json & require_object(const ordered_json & j, std::string_view where)
{
  if (!j.is_object()) {
    throw FormatError(std::string(where) + ": expected an object");
  }
  return j;
}

inline void reject_unknown_keys(
  const ordered_json & j, std::initializer_list<std::string_view> allowed, std::string_view where)
{
  require_object(j, where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto key : allowed) {
      known = known || key == it.key();
    }
    if (!known) {
      throw FormatError(std::string(where) + ": unknown key '" + it.key() + "'");
    }
  }
}

inline const ordered_json & field(const ordered_json & j, const char * key, std::string_view where)
{
  auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(std::string(where) + ": missing key '" + key + "'");
  }
  return *it;
}

inline double finite_number(const ordered_json & j, const char * key, std::string_view where)
{
  const auto & v = field(j, key, where);
  if (!v.is_number()) {
    throw FormatError(std::string(where) + "." + key + ": expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw FormatError(std::string(where) + "." + key + ": not finite");
  }
  return d;
}

inline std::string string_field(const ordered_json & j, const char * key, std::string_view where)
{
  const auto & v = field(j, key, where);
  if (!v.is_string()) {
    throw FormatError(std::string(where) + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

inline const ordered_json & array_field(
  const ordered_json & j, const char * key, std::string_view where)
{
  const auto & v = field(j, key, where);
  if (!v.is_array()) {
    throw FormatError(std::string(where) + "." + key + ": expected an array");
  }
  return v;
}

inline Vec2 point_from_json(const ordered_json & j, std::string_view where)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError(std::string(where) + ": expected [x, y]");
  }
  const Vec2 p{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw FormatError(std::string(where) + ": point not finite");
  }
  return p;
}

inline ordered_json point_to_json(Vec2 p) { return ordered_json::array({p.x, p.y}); }

inline ordered_json parse(std::string_view text, std::string_view where)
{
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(std::string(where) + ": " + e.what());
  }
}

}  // namespace bevhd::json_util

#endif  // BEVHD__JSON_UTIL_HPP_
