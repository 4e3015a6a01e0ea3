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

#include <numbers>
#include <random>

#include "oracles.h"
#include "sidlab/constructions.h"
#include "sidlab/error.h"

namespace sidlab {
namespace {

LinearSystem ex42(std::int64_t p) {
  return LinearSystem::create(p, {{1, -1, 1, -1, 0}, {1, 2, -1, 0, -2}}, "ex42");
}

TEST(GenericWitness, AnnihilatesPhiAndBoundsPsi) {
  const auto psi = ex42(5);
  // The projection onto forms 2..5 has a coefficient ratio other than +-1.
  const std::vector<std::int64_t> row = subsystem(psi, SubsystemSelector({1, 2, 3, 4})).matrix()[0];
  const WitnessResult r = generic_linear_witness(psi, row, 2);
  for (const auto& c : r.clauses) EXPECT_TRUE(c.ok) << c.name;
  const auto phi = LinearSystem::create(5, {row});
  EXPECT_NEAR(std::abs(t_direct(phi, r.function)), 0.0, 1e-9);
  EXPECT_GE(t_direct(psi, r.function).real(), 2.0 / 1e5 - 1e-9);
  EXPECT_LE(r.function.max_abs(), 1.0 + 1e-9);
  EXPECT_NEAR(std::abs(r.function.mean()), 0.0, 1e-12);
  EXPECT_EQ(r.witness.provenance, Provenance::kGenericLinear);
}

TEST(GenericWitness, RejectsDegenerateRows) {
  EXPECT_THROW(generic_linear_witness(ex42(5), {1, 0, 2, 0}, 2), Error);
  EXPECT_THROW(generic_linear_witness(ex42(5), {1, -1, 1, -1}, 2), Error);
  EXPECT_THROW(generic_linear_witness(ex42(5), {1, 2, 4, 3}, 1), Error);
}

TEST(Pm1Witness, FindsNegativeValueAtLargeP) {
  const auto psi = LinearSystem::create(101, {{1, 1, 1, 1, -1}, {1, 2, 3, 5, 25}});
  const WitnessResult r = special_pm1_witness(psi, {1, 1, 1, 1, -1}, 7);
  EXPECT_EQ(r.witness.provenance, Provenance::kSpecialPM1);
  EXPECT_NEAR(std::abs(r.t_phi), 0.0, 1e-9);
  EXPECT_GT(std::abs(r.t_psi), 0.0);
}

TEST(Pm1Witness, PreconditionsAndOrbitObstruction) {
  const auto psi = LinearSystem::create(11, {{1, 1, 1, -1}, {0, 1, 2, 3}});
  try {
    special_pm1_witness(psi, {1, 1, 1, -1}, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoValidU);
  }
  const auto even = LinearSystem::create(101, {{1, -1, 1, -1}, {1, 2, 3, 4}});
  try {
    special_pm1_witness(even, {1, -1, 1, -1}, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPreconditionUnmet);
  }
  // t = 5 is an odd multiple of l = 5.
  EXPECT_THROW(special_pm1_witness(LinearSystem::create(101, {{1, 1, 1, 1, 1}, {1, 2, 3, 5, 25}}),
                                   {1, 1, 1, 1, 1}, 7),
               Error);
}

TEST(QuadraticWitness, GenericSystemBounds) {
  const auto psi = LinearSystem::create(5, oracle::generic_matrix(5, 5));
  ASSERT_TRUE(is_linearly_generic(psi));
  const WitnessResult r = quadratic_witness(psi, 2);
  for (const auto& c : r.clauses) EXPECT_TRUE(c.ok) << c.name;
  EXPECT_TRUE(r.function.is_real(1e-12));
  EXPECT_LE(r.function.max_abs(), 1.0 + 1e-9);
  EXPECT_LE(std::abs(r.function.mean()), 1e-12);
  ASSERT_TRUE(r.measured_constant.has_value());
  EXPECT_GT(*r.measured_constant, 0.0);
}

TEST(GaussSum, MatchesCharacterSumAndRankOracles) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::int64_t p = std::array<std::int64_t, 3>{3, 5, 7}[trial % 3];
    const std::size_t n = 1 + trial % 3;
    ModMatrix q(n, ModVector(n));
    ModVector h(n);
    for (auto& row : q) for (auto& v : row) v = static_cast<std::int64_t>(rng() % p);
    for (auto& v : h) v = static_cast<std::int64_t>(rng() % p);
    const GaussSum g = gauss_sum(p, n, q, h);
    Complex ref = 0.0;
    const std::uint64_t size = oracle::ipow(p, n);
    for (std::uint64_t x = 0; x < size; ++x) {
      const auto d = oracle::digits(x, p, n);
      std::int64_t e = 0;
      for (std::size_t i = 0; i < n; ++i) {
        e += h[i] * d[i];
        for (std::size_t j = 0; j < n; ++j) e += q[i][j] * d[i] * d[j];
      }
      ref += std::polar(1.0, 2 * std::numbers::pi * oracle::mod(e, p) / p);
    }
    ref /= static_cast<double>(size);
    EXPECT_NEAR(std::abs(g.value - ref), 0.0, 1e-12);
    oracle::Matrix cols(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) cols[i][j] = q[i][j] + q[j][i];
    }
    EXPECT_EQ(g.rank, oracle::rank_by_counting(cols, p, n));
    EXPECT_LE(std::abs(g.value), g.bound + 1e-9);
  }
  EXPECT_THROW(gauss_sum(2, 1, {{1}}, {0}), Error);
}

TEST(QuadraticIndicator, CountMatchesBruteForce) {
  const auto sys = ex42(3 + 2);
  const QuadraticIndicatorT r = indicator_quadratic_t(sys, 1);
  const GridFunction a = quadratic_level_set(5, 1);
  std::vector<Complex> v(a.values().begin(), a.values().end());
  oracle::Matrix raw = {{1, -1, 1, -1, 0}, {1, 2, -1, 0, -2}};
  EXPECT_NEAR(r.value, oracle::brute_t(raw, 5, 1, v).real(), 1e-14);
  EXPECT_EQ(a[0], Complex(1.0));
}

TEST(M2RankSum, MatchesSubsetOracle) {
  std::mt19937_64 rng(42);
  int checked = 0;
  while (checked < 20) {
    const std::int64_t p = std::array<std::int64_t, 3>{3, 5, 7}[checked % 3];
    const std::size_t t = 3 + rng() % 5;
    oracle::Matrix raw;
    const auto sys = oracle::random_system(rng, p, 2, t, &raw);
    if (!sys) continue;
    Rational ref = 0;
    for (std::uint64_t mask = 0; mask < (1u << t); ++mask) {
      oracle::Matrix cols;
      for (std::size_t i = 0; i < t; ++i) {
        if (mask >> i & 1) {
          cols.push_back({raw[0][i] * raw[0][i], raw[1][i] * raw[1][i], raw[0][i] * raw[1][i]});
        }
      }
      const auto rk = static_cast<std::int64_t>(oracle::rank_by_counting(cols, p, 3));
      const auto size = static_cast<std::int64_t>(cols.size());
      ref += rational_pow(-p, size - static_cast<std::int64_t>(t)) * rational_pow(p, -rk);
    }
    EXPECT_EQ(m2_rank_sum(*sys).value, ref);
    ++checked;
  }
}

TEST(M2RankSum, GenericClosedForm) {
  for (std::int64_t p : {5, 7}) {
    const auto sys = LinearSystem::create(p, oracle::generic_matrix(p, 5));
    const M2RankSum r = m2_rank_sum(sys);
    EXPECT_TRUE(r.linearly_generic);
    EXPECT_TRUE(r.agree);
  }
  EXPECT_THROW(m2_rank_sum(LinearSystem::create(5, {{1, 1, 1}})), Error);
}

TEST(TensorWitness, FactorsMultiply) {
  const auto psi = LinearSystem::create(5, {{1, 1, 1, 1, 1}, {0, 1, 2, 3, 4}});
  const TensorWitnessResult r = build_tensor_witness(psi, 3);
  EXPECT_EQ(r.witness.factors.size(), 5u);
  EXPECT_NEAR(std::abs(r.t_psi - r.witness.t_value(psi)), 0.0, 1e-15);
  // Every proper (t-1)-subsystem vanishes on the product.
  for_each_k_subset(5, 4, [&](const SubsystemSelector& sel) {
    EXPECT_NEAR(std::abs(r.witness.t_value(subsystem(psi, sel))), 0.0, 1e-12);
  });
  EXPECT_THROW(build_tensor_witness(ex42(5), 3), Error);
}

TEST(AdditiveTuples, SystemShape) {
  const auto a = additive_tuple_system(5, 4);
  EXPECT_EQ(a.t(), 4u);
  EXPECT_EQ(a.codim(), 1u);
  EXPECT_EQ(find_additive_tuples(a, 4).size(), 1u);
}

}  // namespace
}  // namespace sidlab
