// Copyright 2026 The Endograph Authors
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

#ifndef ENDOGRAPH_TOOLS_CLI_H_
#define ENDOGRAPH_TOOLS_CLI_H_

#include <iosfwd>

namespace endograph::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;  // assumptions, failed checks
inline constexpr int kInputFailure = 2;       // usage, schema, I/O

// Default seed when --seed is absent.
inline constexpr const char* kSeedEnv = "ENDOGRAPH_SEED";

// Runs one subcommand. Reports go to `out` (or --out), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace endograph::cli

#endif  // ENDOGRAPH_TOOLS_CLI_H_
