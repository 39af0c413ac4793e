// Copyright 2026 The autocalib Authors
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
// Command-line front end: subcommands for each pipeline stage.

#ifndef AUTOCALIB_TOOLS_CLI_H_
#define AUTOCALIB_TOOLS_CLI_H_

namespace autocalib {

// Returns the process exit status: 0 on success, 1 when a stage fails, 2 on
// configuration errors. Failures also leave error.json in the output
// directory.
int RunCli(int argc, const char* const* argv);

}  // namespace autocalib

#endif  // AUTOCALIB_TOOLS_CLI_H_
