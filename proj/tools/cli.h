// Copyright 2026 The phasewitness Authors
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

#ifndef PHASEWITNESS_TOOLS_CLI_H_
#define PHASEWITNESS_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace phasewitness::cli {

/// Runs one command line (args excludes the program name). Results go to
/// `out` unless --output names a file; diagnostics go to `err`.
///
/// Exit status: 0 success (whether or not anything violates), 2 invalid
/// configuration or arguments, 3 numeric truncation failure, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasewitness::cli

#endif  // PHASEWITNESS_TOOLS_CLI_H_
