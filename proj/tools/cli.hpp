// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The hiris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HIRIS_TOOLS_CLI_HPP
#define HIRIS_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "hiris/config.hpp"

namespace hiris::cli {

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 on validation or usage errors and 2 on processing errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Effective configuration for a command line: the --config file, then each
/// flag in order. Throws ValidationError on bad flags or values.
config::RunConfig resolve_args(const std::vector<std::string>& args);

}  // namespace hiris::cli

#endif  // HIRIS_TOOLS_CLI_HPP
