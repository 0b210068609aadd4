// Copyright 2026 The msenti Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSENTI_TOOLS_COMMANDS_HPP
#define MSENTI_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace msenti::cli {

enum ExitCode : int { kSuccess = 0, kInputFailure = 1, kInternalFailure = 2 };

/// Runs one msenti invocation. args[0] is the program name. Everything the
/// command prints goes to `out` (results) and `err` (diagnostics).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace msenti::cli

#endif // MSENTI_TOOLS_COMMANDS_HPP
