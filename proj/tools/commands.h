// Copyright 2026 The dpiov Authors
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

#ifndef DPIOV_TOOLS_COMMANDS_H_
#define DPIOV_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace dpiov::cli {

// Runs the dpiov command line. `args` excludes the program name. Returns the
// process exit code; failures print {"error":...,"command":...} on `err`.
int RunCli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// Folds `--config file.json` into `args`: each key becomes `--key value...`
// unless the flag is already present, so flags win over the file. When no
// seed is given either way, DPIOV_SEED supplies it. Exposed for tests.
std::vector<std::string> ResolveArgs(std::vector<std::string> args);

}  // namespace dpiov::cli

#endif  // DPIOV_TOOLS_COMMANDS_H_
