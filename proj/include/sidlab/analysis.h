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

#ifndef SIDLAB_ANALYSIS_H_
#define SIDLAB_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "sidlab/certificate.h"
#include "sidlab/functional.h"
#include "sidlab/grid.h"
#include "sidlab/linear_system.h"

namespace sidlab {

inline constexpr std::uint64_t kDefaultSeed = 20240229;

// Evaluates T over subsystems of a fixed witness, transforming each base
// factor once.
class WitnessEvaluator {
 public:
  explicit WitnessEvaluator(const WitnessRef& w, EvalOptions opts = {});

  struct Value {
    Complex value;
    double abs_sum = 0.0;  // scale of the Fourier sum behind `value`
  };
  Value evaluate(const LinearSystem& sys) const;

  const WitnessRef& witness() const noexcept { return w_; }

 private:
  WitnessRef w_;
  EvalOptions opts_;
  std::vector<Spectrum> spectra_;
};

struct Perturbation {
  double delta = 0.0;      // T(alpha + eps w) - alpha^t
  double tolerance = 0.0;  // 1e-9 * sum of |terms| bounds
  std::vector<double> by_size;  // delta split by |S|
};

// sum over nonempty S of alpha^{t-|S|} eps^{|S|} T_{Psi(S)}(w); t <= 20.
Perturbation perturbation(const LinearSystem& sys, double alpha, double eps,
                          const WitnessEvaluator& w);

// 2^{1-t} - (T(1/2 + w) + T(1/2 - w)) = -sum over nonempty even S of
// 2^{1+|S|-t} T_{Psi(S)}(w); t <= 20.
struct Deficit {
  double deficit = 0.0;
  double tolerance = 0.0;  // 1e-9 * sum of |terms| bounds
};
Deficit common_deficit(const LinearSystem& sys, const WitnessEvaluator& w);

struct AnalysisOptions {
  EvalOptions eval;
  double tolerance = 1e-9;
};

Certificate weak_local_violation(const LinearSystem& sys, const WitnessRef& witness,
                                 double alpha, const AnalysisOptions& opts = {});

// A mean-zero f whose (t-1)-subsystem sum is negative, for even t.
GridFunction odd_order_witness(const LinearSystem& sys, std::size_t n,
                               std::uint64_t seed, std::uint64_t budget = 2000,
                               const AnalysisOptions& opts = {});

struct ScheduleOptions {
  AnalysisOptions analysis;
  std::size_t n_max = 8;
};

Certificate local_violation_schedule(const LinearSystem& sys, double alpha, double eps,
                                     const ScheduleOptions& opts = {});

struct SearchResult {
  GridFunction f;
  std::uint64_t iterations = 0;
  std::vector<double> values;  // T_{Psi_i}(f)
};

SearchResult negative_t_search(const std::vector<LinearSystem>& systems, std::size_t n,
                               std::uint64_t budget, std::uint64_t seed,
                               const AnalysisOptions& opts = {});

struct UncommonOptions {
  AnalysisOptions analysis;
  std::size_t n_min = 1;
  std::size_t n_max = 1;
  std::uint64_t search_budget = 100000;
  std::size_t k_max = 8;
  double deficit_tolerance = 1e-10;
};

Certificate uncommon_certificate(const LinearSystem& sys, std::uint64_t seed,
                                 const UncommonOptions& opts = {});

enum class Example { kEx41, kEx42, kEx43 };

std::string_view example_name(Example e);
std::optional<Example> example_from_name(std::string_view name);
LinearSystem example_system(Example e, std::int64_t p);
LinearSystem four_ap_system(std::int64_t p);

struct ExampleOptions {
  AnalysisOptions analysis;
  std::vector<double> alphas{0.3, 0.5, 0.9};
  double epsilon_ratio = 0.5;         // eps = ratio * alpha
  std::optional<double> epsilon;      // explicit eps overrides the ratio
};

Certificate verify_example(Example e, std::int64_t p, std::size_t n, std::size_t samples,
                           std::uint64_t seed, const ExampleOptions& opts = {});

// Mean-zero sample rescaled into [-alpha, 1 - alpha].
GridFunction box_sample(std::int64_t p, std::size_t n, double alpha, std::uint64_t seed);

}  // namespace sidlab

#endif  // SIDLAB_ANALYSIS_H_
