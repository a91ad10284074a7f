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

#ifndef BEVHD__CLI_HPP_
#define BEVHD__CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace bevhd
{

/**
 * @brief Runs one `bevhd` command line; `args` excludes the program name.
 *
 * Returns the process exit code: 0 on success, 1 on operational failure,
 * 2 on usage errors. Poor metrics are not a failure.
 */
int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

/// Makes a running `serve-mock` return. Async-signal-safe.
void request_cli_stop();

}  // namespace bevhd

#endif  // BEVHD__CLI_HPP_
