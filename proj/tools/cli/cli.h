// Copyright 2026 The cvag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVAG_TOOLS_CLI_CLI_H_
#define CVAG_TOOLS_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace cvag::cli {

// Runs the command line `args` (without the program name) and returns the
// process exit code: 0 on success, 2 for malformed input or usage errors, 3
// for contract violations, 4 for numerical degeneracies.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cvag::cli

#endif  // CVAG_TOOLS_CLI_CLI_H_
