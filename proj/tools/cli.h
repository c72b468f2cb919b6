// Copyright 2026 The CoRA Authors.
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

#ifndef CORA_TOOLS_CLI_H_
#define CORA_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace cora::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInternal = 2;

// Runs one command. `args` excludes the program name. Returns the process
// exit code: 0 on success, 1 on bad input/config/usage, 2 on an internal
// invariant violation.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cora::cli

#endif  // CORA_TOOLS_CLI_H_
