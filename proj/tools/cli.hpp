/*
 * Copyright 2026 The coalex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COALEX_TOOLS_CLI_HPP_
#define COALEX_TOOLS_CLI_HPP_

namespace coalex::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kInputError = 2, kProtocolError = 3, kInternal = 4 };

// Parses argv, runs the subcommand and maps exceptions to exit codes.
int run(int argc, char** argv);

}  // namespace coalex::cli

#endif  // COALEX_TOOLS_CLI_HPP_
