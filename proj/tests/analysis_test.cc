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

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "sidlab/analysis.h"
#include "sidlab/error.h"

namespace sidlab {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kInvalidInput;
}

TEST(Perturbation, MatchesDirectEvaluation) {
  std::mt19937_64 rng(51);
  const auto sys = LinearSystem::create(5, oracle::generic_matrix(5, 5));
  for (int trial = 0; trial < 10; ++trial) {
    const GridFunction f(5, 1, oracle::mean_zero(oracle::random_values(rng, 5)));
    const WitnessEvaluator ev(WitnessRef::dense(f));
    const double alpha = 0.4, eps = 0.3;
    const Perturbation d = perturbation(sys, alpha, eps, ev);
    const double direct = t_direct(sys, f.affine(alpha, eps)).real() - std::pow(alpha, 5);
    EXPECT_NEAR(d.delta, direct, 1e-12);
    double split = 0.0;
    for (double v : d.by_size) split += v;
    EXPECT_NEAR(split, d.delta, 1e-14);
  }
}

TEST(WitnessEvaluator, HonoursScaleAndLocalisation) {
  std::mt19937_64 rng(52);
  const auto sys = LinearSystem::create(3, {{1, 1, 1}});
  const GridFunction f(3, 1, oracle::random_values(rng, 3));
  const WitnessRef w = WitnessRef::dense(f).scaled(0.5).localised(1);
  EXPECT_EQ(w.n(), 2u);
  const GridFunction m = w.materialize();
  EXPECT_NEAR(WitnessEvaluator(w).evaluate(sys).value.real(), t_direct(sys, m).real(), 1e-14);
  EXPECT_NEAR(t_direct(sys, m).real(), std::pow(0.5, 3) / 9.0 * t_direct(sys, f).real(), 1e-14);
}

TEST(WeakLocal, TensorWitnessViolatesGenericQuintic) {
  const auto sys = LinearSystem::create(5, {{1, 1, 1, 1, 1}, {0, 1, 2, 3, 4}});
  const TensorWitnessResult tw = build_tensor_witness(sys, kDefaultSeed);
  const Certificate c = weak_local_violation(sys, WitnessRef::factored(tw.witness), 0.5);
  EXPECT_EQ(c.kind, CertificateKind::kNotWeaklyLocallySidorenko);
  EXPECT_GT(c.margin, c.tolerance);
  ASSERT_TRUE(c.epsilon && c.alpha);
  EXPECT_LE(*c.epsilon, *c.alpha);
  const Reverification rv = reverify(certificate_from_json(certificate_to_json(c)));
  EXPECT_TRUE(rv.ok) << rv.message;
}

TEST(WeakLocal, RejectsBadWitnesses) {
  const auto sys = LinearSystem::create(5, oracle::generic_matrix(5, 5));
  EXPECT_EQ(code_of([&] {
              weak_local_violation(sys, WitnessRef::dense(GridFunction::constant(5, 1, 0.1)), 0.5);
            }),
            ErrorCode::kMeanNotZero);
  EXPECT_EQ(code_of([&] {
              weak_local_violation(sys, WitnessRef::dense(GridFunction::constant(5, 1, 0.0)), 0.5);
            }),
            ErrorCode::kNoViolationFound);
}

TEST(OddOrder, SubsystemSumIsNegative) {
  const auto sys = LinearSystem::create(7, oracle::generic_matrix(7, 5));
  const GridFunction f = odd_order_witness(sys, 1, 5);
  EXPECT_NEAR(std::abs(f.mean()), 0.0, 1e-12);
  double sum = 0.0;
  for_each_k_subset(5, 4, [&](const SubsystemSelector& sel) {
    sum += t_direct(subsystem(sys, sel), f).real();
  });
  EXPECT_LT(sum, 0.0);
}

TEST(LocalSchedule, ReportsTheProjectedCrossover) {
  const auto sys = LinearSystem::create(5, {{1, -1, 1, -1, 0}, {1, 2, -1, 0, -2}});
  ScheduleOptions opts;
  opts.n_max = 3;
  EXPECT_EQ(code_of([&] { local_violation_schedule(sys, 0.9, 0.5, opts); }),
            ErrorCode::kBudgetExceeded);
  EXPECT_EQ(code_of([&] {
              local_violation_schedule(LinearSystem::create(5, oracle::generic_matrix(5, 4)),
                                       0.5, 0.5, opts);
            }),
            ErrorCode::kPreconditionUnmet);
}

TEST(NegativeSearch, FourApIsNonNegativeOnTheLine) {
  // On F_5 every mean-zero f has T_4AP(f) = (sum f^2)^2 / 50 >= 0.
  const auto ap = four_ap_system(5);
  EXPECT_EQ(code_of([&] { negative_t_search({ap}, 1, 2000, 1); }),
            ErrorCode::kSearchExhausted);
  std::mt19937_64 rng(53);
  for (int i = 0; i < 20; ++i) {
    const GridFunction f(5, 1, oracle::mean_zero(oracle::random_values(rng, 5)));
    double sq = 0.0;
    for (const auto& z : f.values()) sq += std::norm(z);
    EXPECT_NEAR(t_direct(ap, f).real(), sq * sq / 50.0, 1e-14);
  }
}

TEST(NegativeSearch, FindsNegativeValuesOnThePlane) {
  const auto ap = four_ap_system(5);
  const SearchResult r = negative_t_search({ap}, 2, 100000, kDefaultSeed);
  ASSERT_EQ(r.values.size(), 1u);
  EXPECT_LT(r.values[0], 0.0);
  EXPECT_NEAR(t_direct(ap, r.f).real(), r.values[0], 1e-12);
  EXPECT_LE(r.f.max_abs(), 0.5 + 1e-12);
}

TEST(Uncommon, CertificateOnThePlane) {
  UncommonOptions opts;
  opts.n_max = 2;
  const Certificate c = uncommon_certificate(four_ap_system(5), kDefaultSeed, opts);
  EXPECT_EQ(c.kind, CertificateKind::kUncommon);
  ASSERT_TRUE(c.k.has_value());
  EXPECT_LE(*c.k, 8u);
  EXPECT_LT(c.lhs, 0.125 - 1e-10);
  const Reverification rv = reverify(certificate_from_json(certificate_to_json(c)));
  EXPECT_TRUE(rv.ok) << rv.message;
}

TEST(Uncommon, RefusesRepeatedForms) {
  const auto sys = LinearSystem::create(5, {{1, -1, 0, 0}, {0, 0, 1, 1}});
  EXPECT_THROW(uncommon_certificate(sys, 1), Error);
}

TEST(Examples, VerifyAndRejectSmallPrimes) {
  EXPECT_GT(verify_example(Example::kEx41, 5, 1, 12, 1).margin, 0.0);
  EXPECT_GT(verify_example(Example::kEx43, 5, 1, 12, 1).margin, 0.0);
  EXPECT_GT(verify_example(Example::kEx42, 7, 1, 12, 1).margin, 0.0);
  EXPECT_EQ(code_of([] { verify_example(Example::kEx42, 3, 1, 4, 1); }),
            ErrorCode::kPreconditionUnmet);
  EXPECT_EQ(example_from_name("ex43"), Example::kEx43);
  EXPECT_FALSE(example_from_name("ex44").has_value());
}

TEST(Examples, BoxSamplesAreFeasible) {
  for (double alpha : {0.1, 0.5, 0.95}) {
    const GridFunction f = box_sample(5, 2, alpha, 9);
    EXPECT_NEAR(std::abs(f.mean()), 0.0, 1e-14);
    EXPECT_TRUE(f.affine(alpha, 1.0).in_range(0.0, 1.0, 1e-12));
  }
}

}  // namespace
}  // namespace sidlab
