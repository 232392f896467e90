// Copyright 2026 The Coltype Authors.
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

#ifndef COLTYPE_TOOLS_CLI_H_
#define COLTYPE_TOOLS_CLI_H_

#include <ostream>

namespace coltype {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;  // Bad flags, unreadable or bad input.
inline constexpr int kExitState = 3;  // Missing or corrupt model state.

// Entry point of the `coltype` tool. Results go to `out`, diagnostics to
// `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace coltype

#endif  // COLTYPE_TOOLS_CLI_H_
