//
// Copyright 2026 The LDPC Authors
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
//

#ifndef LDPC_TOOLS_CLI_H_
#define LDPC_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ldpc {

// Runs the command-line front end. Exit codes: 0 success, 2 usage error,
// 3 infeasible configuration or overflow guard, 4 numerical degeneracy.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ldpc

#endif  // LDPC_TOOLS_CLI_H_
