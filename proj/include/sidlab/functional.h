// Copyright 2026 The sidlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIDLAB_FUNCTIONAL_H_
#define SIDLAB_FUNCTIONAL_H_

#include <cstdint>
#include <vector>

#include "sidlab/grid.h"
#include "sidlab/linear_system.h"
#include "sidlab/rational.h"

namespace sidlab {

struct EvalOptions {
  // Maximum number of kernel points (direct) or frequency tuples (Fourier).
  std::uint64_t budget = 100'000'000;
  // Worker threads. Reduction order is fixed, so results do not depend on it.
  unsigned threads = 1;
};

// Default numeric tolerance for a function: 1e-9 * max(1, sum_x |f(x)|).
double default_tolerance(const GridFunction& f);

// T_sys(f) = E_{x in ker M} f(x_1)...f(x_t), enumerating the kernel. Functions
// carrying the indicator hint take the exact counting path.
Complex t_direct(const LinearSystem& sys, const GridFunction& f,
                 const EvalOptions& opts = {});

// Exact T_sys(1_A) as a rational; f must carry the indicator hint.
Rational t_direct_exact(const LinearSystem& sys, const GridFunction& f,
                        const EvalOptions& opts = {});

struct FourierSum {
  Complex value;
  double abs_sum = 0.0;  // sum over frequency tuples of |product|
  std::uint64_t terms = 0;
  std::size_t t = 0;
  // Worst-case floating-point error of the blocked summation.
  double rounding_bound() const;
};

// T_sys(f) = sum over h in im M^T of f^(h_1)...f^(h_t).
FourierSum t_fourier_detailed(const LinearSystem& sys, const Spectrum& s,
                              const EvalOptions& opts = {});
Complex t_fourier(const LinearSystem& sys, const Spectrum& s,
                  const EvalOptions& opts = {});

// Evaluates by whichever route enumerates fewer points.
Complex t_value(const LinearSystem& sys, const GridFunction& f,
                const EvalOptions& opts = {});

struct ExpansionTerm {
  std::uint64_t mask = 0;  // subset S of [t] as a bitmask
  std::size_t size = 0;
  Complex value;           // alpha^{t-|S|} T_{Psi(S)}(f)
};

struct ExpansionTable {
  std::vector<ExpansionTerm> terms;  // ordered by mask
  Complex total;
};

// T_sys(alpha + f) split over subsets. f must have mean zero; t <= 12.
ExpansionTable expansion(const LinearSystem& sys, double alpha,
                         const GridFunction& f, const EvalOptions& opts = {});

struct CommonValue {
  double value = 0.0;      // T(f) + T(1 - f)
  double threshold = 0.0;  // 2^{1-t}
  double deficit = 0.0;    // threshold - value
};

// f must take values in [0, 1].
CommonValue common_value(const LinearSystem& sys, const GridFunction& f,
                         const EvalOptions& opts = {});

}  // namespace sidlab

#endif  // SIDLAB_FUNCTIONAL_H_
