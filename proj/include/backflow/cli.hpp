// Copyright 2026 The qbackflow Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace backflow::cli {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
    kOk = 0,
    kUsage = 2,
    kEngine = 3,
    kData = 4,
};

/// Runs the command line `args` (args[0] is the program name). The report
/// goes to `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace backflow::cli
