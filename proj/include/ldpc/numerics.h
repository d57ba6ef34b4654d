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

#ifndef LDPC_NUMERICS_H_
#define LDPC_NUMERICS_H_

#include <cstdint>
#include <functional>

namespace ldpc {

// Shapes of a Beta integrand. Valid for a, b at least up to 500; all heavy
// lifting is carried in log space.
struct BetaShape {
  double a = 1.0;
  double b = 1.0;
};

struct BinomialSpec {
  int64_t trials = 1;
  double success_prob = 0.0;
};

// Exact binomial expectations refuse to run past this many trials rather
// than silently approximate.
inline constexpr int64_t kMaxBinomialTrials = int64_t{1} << 20;

// ln B(a, b).
double LogBeta(const BetaShape& shape);

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation with the symmetry switch at x = (a + 1) / (a + b + 2).
double RegIncBeta(double x, const BetaShape& shape);

// ln I_x(a, b). Usable where I_x itself would underflow.
double LogRegIncBeta(double x, const BetaShape& shape);

// Unregularized B(x; a, b) = I_x(a, b) * B(a, b).
double IncBeta(double x, const BetaShape& shape);

// Solves I_x(a, b) = p for x. Newton iteration safeguarded by bisection.
double RegIncBetaInverse(double p, const BetaShape& shape);

// Sum_k P(Binom(N, p) = k) * f(k / N), evaluated exactly from the mode
// outward. Terms are dropped only once they fall below 1e-20 of the modal
// mass, and the sum is renormalized over the retained support, so constant
// integrands come back exact. Throws InfeasibleError past kMaxBinomialTrials.
double ExpectOverBinomial(const BinomialSpec& spec,
                          const std::function<double(double)>& f);

}  // namespace ldpc

#endif  // LDPC_NUMERICS_H_
