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

#ifndef LDPC_ERRORS_H_
#define LDPC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ldpc {

// A requested configuration has no solution (calibration with no feasible
// cap threshold, candidate counts beyond the overflow guard, root searches
// with no root in range).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// A computation degenerated numerically (zero estimator scale, incomplete
// beta mass underflowing to zero).
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ldpc

#endif  // LDPC_ERRORS_H_
