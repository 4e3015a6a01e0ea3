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
#include "sidlab/error.h"
#include "sidlab/functional.h"

namespace sidlab {
namespace {

TEST(Functional, DirectAndFourierMatchBruteForce) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::int64_t p = (trial % 2) ? 3 : 5;
    const std::size_t n = (p == 3 && trial % 3 == 0) ? 2 : 1;
    const std::size_t t = 2 + rng() % 4;
    const std::size_t c = 1 + rng() % std::min<std::size_t>(2, t - 1);
    oracle::Matrix raw;
    const auto sys = oracle::random_system(rng, p, c, t, &raw);
    if (!sys || oracle::ipow(oracle::ipow(p, n), t) > 2'000'000) continue;
    const auto v = oracle::random_values(rng, oracle::ipow(p, n), trial % 4 != 0);
    const GridFunction f(p, n, v);
    const Complex ref = oracle::brute_t(raw, p, n, v);
    EXPECT_NEAR(std::abs(t_direct(*sys, f) - ref), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(t_fourier(*sys, dft(f)) - ref), 0.0, 1e-10);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(Functional, ExactIndicatorCount) {
  // The 3-AP x - 2y + z = 0 over F_5 restricted to {0, 1}: solutions (0,0,0),
  // (1,1,1) out of 25.
  const auto ap3 = LinearSystem::create(5, {{1, -2, 1}});
  const std::uint64_t members[] = {0, 1};
  const auto a = GridFunction::indicator(5, 1, members);
  EXPECT_EQ(t_direct_exact(ap3, a), Rational(2, 25));
  EXPECT_NEAR(t_direct(ap3, a).real(), 2.0 / 25.0, 1e-15);
  EXPECT_THROW(t_direct_exact(ap3, GridFunction::constant(5, 1, 0.5)), Error);
}

TEST(Functional, ConstantsGiveAlphaToTheT) {
  const auto sys = LinearSystem::create(7, {{1, 2, 3, 4}, {0, 1, 5, 6}});
  const auto c = GridFunction::constant(7, 2, 0.3);
  EXPECT_NEAR(t_direct(sys, c).real(), std::pow(0.3, 4), 1e-15);
  EXPECT_NEAR(t_fourier(sys, dft(c)).real(), std::pow(0.3, 4), 1e-15);
}

TEST(Functional, ThreadCountDoesNotChangeTheResult) {
  std::mt19937_64 rng(32);
  const auto sys = LinearSystem::create(5, {{1, -2, 1, 0}, {0, 1, -2, 1}});
  const GridFunction f(5, 3, oracle::random_values(rng, 125));
  const Complex one = t_direct(sys, f, EvalOptions{100'000'000, 1});
  const Complex four = t_direct(sys, f, EvalOptions{100'000'000, 4});
  EXPECT_EQ(one, four);
  const Spectrum s = dft(f);
  EXPECT_EQ(t_fourier(sys, s, {100'000'000, 1}), t_fourier(sys, s, {100'000'000, 3}));
}

TEST(Functional, BudgetAndFieldChecks) {
  const auto sys = LinearSystem::create(5, {{1, -2, 1, 0}, {0, 1, -2, 1}});
  const GridFunction f = GridFunction::constant(5, 4, 0.1);
  try {
    t_direct(sys, f, EvalOptions{1000, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
  EXPECT_THROW(t_direct(sys, GridFunction::constant(3, 1, 0.1)), Error);
}

TEST(Functional, ExpansionSumsToTheShiftedValue) {
  std::mt19937_64 rng(33);
  const auto sys = LinearSystem::create(5, {{1, -1, 1, -1, 0}, {1, 2, -1, 0, -2}});
  const GridFunction f(5, 2, oracle::mean_zero(oracle::random_values(rng, 25)));
  const ExpansionTable table = expansion(sys, 0.4, f);
  EXPECT_EQ(table.terms.size(), 32u);
  EXPECT_NEAR(std::abs(table.total - t_direct(sys, f.affine(0.4, 1.0))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(table.terms[0].value - std::pow(0.4, 5)), 0.0, 1e-15);
  EXPECT_THROW(expansion(sys, 0.4, GridFunction::constant(5, 1, 0.2)), Error);
}

TEST(Functional, CommonValue) {
  const auto ap = LinearSystem::create(5, {{1, -2, 1, 0}, {0, 1, -2, 1}});
  const CommonValue half = common_value(ap, GridFunction::constant(5, 1, 0.5));
  EXPECT_NEAR(half.value, 0.125, 1e-15);
  EXPECT_DOUBLE_EQ(half.threshold, 0.125);
  EXPECT_NEAR(half.deficit, 0.0, 1e-15);
  EXPECT_THROW(common_value(ap, GridFunction::constant(5, 1, 1.5)), Error);
}

}  // namespace
}  // namespace sidlab
