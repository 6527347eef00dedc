// Copyright 2026 The semimarkov Authors
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

#ifndef SEMIMARKOV_TOOLS_COMMANDS_H
#define SEMIMARKOV_TOOLS_COMMANDS_H

#include <ostream>
#include <string>
#include <vector>

namespace semimarkov::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSpecError = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command line (without the program name). Data goes to out, or to
/// the --output file, resolved against $SEMIMARKOV_OUTPUT_DIR when relative.
/// Returns 0 on success, 2 for invalid flags or spec strings, 3 for numerical
/// failure and 1 for anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semimarkov::cli

#endif
