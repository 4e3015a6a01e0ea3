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

#ifndef SIDLAB_LINEAR_SYSTEM_H_
#define SIDLAB_LINEAR_SYSTEM_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sidlab/linalg.h"
#include "sidlab/prime_field.h"

namespace sidlab {

// A nonempty set of form indices (0-based), kept sorted.
class SubsystemSelector {
 public:
  explicit SubsystemSelector(std::vector<std::size_t> indices);

  static SubsystemSelector from_mask(std::uint64_t mask);
  static SubsystemSelector all(std::size_t t);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::uint64_t mask() const noexcept;

  // Throws kInvalidSelector if any index is >= t.
  void validate(std::size_t t) const;

  auto operator<=>(const SubsystemSelector&) const = default;

 private:
  std::vector<std::size_t> indices_;
};

enum class SystemKind {
  kEquations,  // at least one defining equation
  kFullSpace,  // codimension 0: every tuple is a solution
};

// A system of t linear forms over F_p described by the equations cutting out
// its image: im Psi = ker M with M a c x t matrix of full row rank, stored in
// reduced row echelon form.
class LinearSystem {
 public:
  // Validating constructor (used for user input). Entries are reduced mod p;
  // rank-deficient input is reduced. Rejects all-zero input (kZeroRank), a zero
  // column (kZeroColumn: an unconstrained variable) and forms that vanish
  // identically on the solution set (kZeroForm).
  static LinearSystem create(std::int64_t p,
                             const std::vector<std::vector<std::int64_t>>& rows,
                             std::optional<std::string> name = std::nullopt);

  // The codimension-0 system on t coordinates.
  static LinearSystem full_space(const PrimeField& field, std::size_t t);

  // Reduces `rows` without the degeneracy checks of create(). Projections of
  // valid systems can legitimately have zero columns.
  static LinearSystem from_rows(const PrimeField& field, ModMatrix rows,
                                std::size_t t);

  const PrimeField& field() const noexcept { return field_; }
  std::int64_t p() const noexcept { return field_.p(); }
  std::size_t t() const noexcept { return t_; }
  std::size_t codim() const noexcept { return matrix_.size(); }
  std::size_t dim() const noexcept { return t_ - matrix_.size(); }
  SystemKind kind() const noexcept {
    return matrix_.empty() ? SystemKind::kFullSpace : SystemKind::kEquations;
  }
  const std::optional<std::string>& name() const noexcept { return name_; }

  const ModMatrix& matrix() const noexcept { return matrix_; }
  const ModMatrix& kernel_basis() const noexcept { return kernel_; }

  // Row i holds the coefficients of psi_i in the kernel parameterization
  // (t x D).
  ModMatrix form_coefficients() const;
  // Row i holds column i of M, i.e. psi_i^perp as a form in c variables
  // (t x c). im M^T = {(psi_1^perp(y), ..., psi_t^perp(y)) : y in F_p^c}.
  ModMatrix dual_coefficients() const;

  bool contains(const ModVector& x) const;

  LinearSystem with_name(std::optional<std::string> name) const {
    LinearSystem copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  bool operator==(const LinearSystem& o) const noexcept {
    return field_ == o.field_ && t_ == o.t_ && matrix_ == o.matrix_;
  }

 private:
  LinearSystem(PrimeField field, std::size_t t, ModMatrix matrix,
               ModMatrix kernel)
      : field_(field), t_(t), matrix_(std::move(matrix)),
        kernel_(std::move(kernel)) {}

  PrimeField field_;
  std::size_t t_;
  ModMatrix matrix_;
  ModMatrix kernel_;
  std::optional<std::string> name_;
};

// Projection of the solution set onto the coordinates in `sel`.
LinearSystem subsystem(const LinearSystem& sys, const SubsystemSelector& sel);

bool contains_coordinate_hyperplane(const LinearSystem& sys);

// True iff T_sys(f) = 0 for every mean-zero f on F_p^n, i.e. no vector of
// im M^T over F_p^n has all coordinates nonzero. Requires codim <= 2.
bool vanishes_on_mean_zero(const LinearSystem& sys, std::size_t n = 1);

bool is_linearly_generic(const LinearSystem& sys);

// Size of the smallest subsystem whose image contains no coordinate
// hyperplane; t + 1 if there is none.
std::size_t s_value(const LinearSystem& sys);

// Smallest s in [1, s_max] such that the (s+1)-th powers of the forms are
// linearly independent; s_max + 1 if none. Requires p > s_max + 1.
int complexity(const LinearSystem& sys, int s_max);

// Every k-subset whose projection is a single equation with coefficients
// +1/-1 (up to scaling), k/2 of each sign.
std::vector<SubsystemSelector> find_additive_tuples(const LinearSystem& sys,
                                                    std::size_t k);

bool has_repeated_forms(const LinearSystem& sys);

enum class PredictedStatus {
  kNotLocallySidorenko,
  kNotWeaklyLocallySidorenko,
  kUndetermined,
};

std::string_view status_name(PredictedStatus s);

struct AdditiveTuple {
  SubsystemSelector selector;
  std::size_t length;
};

struct ClassificationReport {
  std::size_t p = 0;
  std::size_t t = 0;
  std::size_t codimension = 0;
  bool linearly_generic = false;
  std::size_t s_value = 0;
  std::optional<int> complexity;  // empty when p is too small to compute it
  int complexity_s_max = 0;
  std::vector<AdditiveTuple> additive_tuples;
  PredictedStatus predicted_status = PredictedStatus::kUndetermined;
  std::string justification;
};

ClassificationReport classify(const LinearSystem& sys);

// 3 x t matrix with rows r1^2, r2^2, r1*r2 (coordinatewise). Codim must be 2.
ModMatrix m2_matrix(const LinearSystem& sys);
std::size_t m2_rank(const LinearSystem& sys, const SubsystemSelector& sel);

// Calls fn(selector) for every k-subset of [t] in lexicographic order.
template <class Fn>
void for_each_k_subset(std::size_t t, std::size_t k, Fn&& fn) {
  if (k == 0 || k > t) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(SubsystemSelector(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == t - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace sidlab

#endif  // SIDLAB_LINEAR_SYSTEM_H_
