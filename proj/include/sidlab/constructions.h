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

#ifndef SIDLAB_CONSTRUCTIONS_H_
#define SIDLAB_CONSTRUCTIONS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sidlab/functional.h"
#include "sidlab/grid.h"
#include "sidlab/linear_system.h"
#include "sidlab/rational.h"

namespace sidlab {

enum class Provenance { kGenericLinear, kSpecialPM1, kQuadratic, kTensor };

std::string_view provenance_name(Provenance p);

// One checked guarantee of a construction.
struct Clause {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct WitnessParameters {
  std::size_t n = 0;
  std::vector<std::int64_t> phi_row;   // the equation the witness annihilates
  std::vector<std::uint64_t> h;        // chosen frequencies h_1, h_2
  std::vector<std::uint64_t> u;        // u = M^T (h_1, h_2), as grid indices
  std::vector<double> amplitudes;      // c_i (special +-1 construction)
  std::int64_t l = 0;                  // |#{+1} - #{-1}|
  std::optional<std::uint64_t> seed;
};

// A real mean-zero function given by a sparse Fourier transform.
struct FrequencyWitness {
  std::int64_t p = 0;
  std::size_t n = 0;
  Provenance provenance = Provenance::kGenericLinear;
  std::vector<std::pair<std::uint64_t, Complex>> support;  // sorted by index
  WitnessParameters parameters;

  Spectrum spectrum() const;
  GridFunction function() const;  // real part of the inverse transform
};

struct WitnessResult {
  FrequencyWitness witness;
  GridFunction function;
  Complex t_phi;
  Complex t_psi;
  std::vector<Clause> clauses;
  // |T_Psi(f)| p^{n(t-4)/2} for the quadratic construction.
  std::optional<double> measured_constant;
};

struct ConstructionOptions {
  double tolerance = 1e-9;
  EvalOptions eval;
};

// f^(+-u_i) = 1/(2t) with u = M^T(h_1, h_2). Requires psi linearly generic,
// phi_row with nonzero entries and a pair a_i != +-a_j, n >= 2. A seed picks a
// random independent pair (h_1, h_2) instead of (e_1, e_2).
WitnessResult generic_linear_witness(const LinearSystem& psi,
                                     const std::vector<std::int64_t>& phi_row,
                                     std::size_t n,
                                     std::optional<std::uint64_t> seed = {},
                                     const ConstructionOptions& opts = {});

// Over F_p (n = 1): f^(u_i) = c_i e^{i pi/(2l)}/(2t) where u in im M^T avoids
// every coordinate hyperplane and every nontrivial signed permutation of
// im M^T. `signs` holds the +-1 coefficients of the annihilated equation.
WitnessResult special_pm1_witness(const LinearSystem& psi,
                                  const std::vector<int>& signs,
                                  std::uint64_t seed,
                                  const ConstructionOptions& opts = {});

// f^(h) = (1_A(h) - 1/p)/(p^{n/2} + 1) off zero, A = {h : h.h = 0}. Requires
// psi linearly generic of codimension 2 with t >= 5 odd.
WitnessResult quadratic_witness(const LinearSystem& psi, std::size_t n,
                                const ConstructionOptions& opts = {});

// The additive k-tuple x_1 - x_2 + ... - x_k = 0 over F_p.
LinearSystem additive_tuple_system(std::int64_t p, std::size_t k);

// Zero set of x.x in F_p^n.
GridFunction quadratic_level_set(std::int64_t p, std::size_t n);

struct GaussSum {
  Complex value;
  std::size_t rank = 0;  // rank of (Mq + Mq^T)/2
  double bound = 0.0;    // p^{-rank/2}
};

// E_x e_p(x^T Mq x + h.x) by direct summation; p odd.
GaussSum gauss_sum(std::int64_t p, std::size_t n, const ModMatrix& mq,
                   const ModVector& h);

struct QuadraticIndicatorT {
  Rational exact;
  double value = 0.0;
  std::size_t k = 0;  // dim span of {psi_i(x)^T psi_i(x)}
  double deviation = 0.0;  // |value - p^{-k}|
  double bound = 0.0;      // p^{-n/2}
  bool bound_ok = false;
};

QuadraticIndicatorT indicator_quadratic_t(const LinearSystem& sys,
                                          std::size_t n,
                                          const EvalOptions& opts = {},
                                          double tolerance = 1e-9);

struct M2RankSum {
  Rational value;           // sum_S (-p)^{|S|-t} p^{-rank M_S^(2)}
  BigInt closed_form_numerator;
  bool linearly_generic = false;
  // value == numerator (-p)^{-t} p^{-3}
  bool agree = false;
};

BigInt m2_closed_form_numerator(std::int64_t p, std::int64_t t);
M2RankSum m2_rank_sum(const LinearSystem& sys);

// f = sign * (f_1 (x) ... (x) f_m), kept factored.
struct TensorWitness {
  std::vector<SubsystemSelector> subsets;
  std::vector<GridFunction> factors;
  double sign = 1.0;

  std::int64_t p() const { return factors.front().p(); }
  std::size_t n() const;
  GridFunction materialize() const;
  // T_sys(f) through multiplicativity over the factors.
  Complex t_value(const LinearSystem& sys, const EvalOptions& opts = {}) const;
};

struct TensorWitnessResult {
  TensorWitness witness;
  Complex t_psi;
  bool direct_check = false;  // whether the tensored grid was evaluated directly
  std::vector<Clause> clauses;
};

// Tensors one witness per (t-1)-subset. Each must be mean-zero, annihilated by
// its subsystem and have T_psi != 0. For odd t the sign is chosen so that
// T_psi(f) < 0.
TensorWitnessResult tensor_witness(
    const LinearSystem& psi,
    const std::map<SubsystemSelector, GridFunction>& per_subsystem,
    const ConstructionOptions& opts = {});

// Builds every per-subsystem witness (generic construction on n = 2 where a
// coefficient ratio differs from +-1, the +-1 construction otherwise), then
// tensors them.
TensorWitnessResult build_tensor_witness(const LinearSystem& psi,
                                         std::uint64_t seed,
                                         const ConstructionOptions& opts = {});

}  // namespace sidlab

#endif  // SIDLAB_CONSTRUCTIONS_H_
