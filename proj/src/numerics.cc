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

#include "ldpc/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldpc/errors.h"

namespace ldpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckShape(const BetaShape& shape) {
  if (!(shape.a > 0.0) || !(shape.b > 0.0)) {
    throw std::invalid_argument("beta shape parameters must be positive");
  }
}

void CheckUnitInterval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("argument outside [0, 1]");
  }
}

// Continued fraction for the incomplete beta function, modified Lentz
// iteration. Converges for x < (a + 1) / (a + b + 2).
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;
}

// ln I_x(a, b) on the branch where the continued fraction converges.
double LogRegIncBetaDirect(double x, double a, double b) {
  return a * std::log(x) + b * std::log1p(-x) - std::log(a) -
         LogBeta({a, b}) + std::log(BetaContinuedFraction(a, b, x));
}

}  // namespace

double LogBeta(const BetaShape& shape) {
  CheckShape(shape);
  return std::lgamma(shape.a) + std::lgamma(shape.b) - std::lgamma(shape.a + shape.b);
}

double LogRegIncBeta(double x, const BetaShape& shape) {
  CheckShape(shape);
  CheckUnitInterval(x);
  if (x == 0.0) return -kInf;
  if (x == 1.0) return 0.0;
  const double a = shape.a;
  const double b = shape.b;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return LogRegIncBetaDirect(x, a, b);
  }
  // I_x(a, b) = 1 - I_{1-x}(b, a); the mirrored branch is bounded away from
  // one, so the subtraction is safe.
  const double other = std::exp(LogRegIncBetaDirect(1.0 - x, b, a));
  return std::log1p(-other);
}

double RegIncBeta(double x, const BetaShape& shape) {
  return std::exp(LogRegIncBeta(x, shape));
}

double IncBeta(double x, const BetaShape& shape) {
  CheckShape(shape);
  CheckUnitInterval(x);
  if (x == 0.0) return 0.0;
  return std::exp(LogRegIncBeta(x, shape) + LogBeta(shape));
}

double RegIncBetaInverse(double p, const BetaShape& shape) {
  CheckShape(shape);
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability outside [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const double log_norm = -LogBeta(shape);
  double lo = 0.0, hi = 1.0;
  double x = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = RegIncBeta(x, shape) - p;
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double log_pdf = (shape.a - 1.0) * std::log(x) +
                           (shape.b - 1.0) * std::log1p(-x) + log_norm;
    double next = x - fx * std::exp(-log_pdf);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * (1.0 + std::fabs(x))) return next;
    x = next;
  }
  return x;
}

double ExpectOverBinomial(const BinomialSpec& spec,
                          const std::function<double(double)>& f) {
  const int64_t n = spec.trials;
  const double p = spec.success_prob;
  if (n < 1) throw std::invalid_argument("binomial trials must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("success_prob outside [0, 1]");
  if (n > kMaxBinomialTrials) {
    throw InfeasibleError("binomial expectation refused: trials exceed 2^20");
  }
  if (p == 0.0) return f(0.0);
  if (p == 1.0) return f(1.0);

  const double nd = static_cast<double>(n);
  const double odds = p / (1.0 - p);
  const int64_t mode = std::clamp<int64_t>(
      static_cast<int64_t>(std::floor((nd + 1.0) * p)), 0, n);
  // Weights are carried relative to the modal mass; the final
  // renormalization restores the absolute scale and absorbs the truncated
  // tails, so constant integrands come back exact.
  const double cutoff = 1e-20;

  double mass = 1.0;
  double acc = f(static_cast<double>(mode) / nd);

  double w = 1.0;
  for (int64_t k = mode + 1; k <= n; ++k) {
    w *= odds * static_cast<double>(n - k + 1) / static_cast<double>(k);
    if (w < cutoff) break;
    mass += w;
    acc += w * f(static_cast<double>(k) / nd);
  }
  w = 1.0;
  for (int64_t k = mode - 1; k >= 0; --k) {
    w *= static_cast<double>(k + 1) / (odds * static_cast<double>(n - k));
    if (w < cutoff) break;
    mass += w;
    acc += w * f(static_cast<double>(k) / nd);
  }
  return acc / mass;
}

}  // namespace ldpc
