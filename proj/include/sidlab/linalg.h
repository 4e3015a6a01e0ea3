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

#ifndef SIDLAB_LINALG_H_
#define SIDLAB_LINALG_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sidlab/prime_field.h"

namespace sidlab {

using ModVector = std::vector<std::int64_t>;
using ModMatrix = std::vector<ModVector>;

struct RowEchelon {
  ModMatrix rows;                   // nonzero rows only, pivots normalized to 1
  std::vector<std::size_t> pivots;  // pivot column of each row
};

// Reduced row echelon form. Pivoting is deterministic: columns are scanned
// left to right and the pivot row is the smallest eligible row index.
RowEchelon rref(const PrimeField& field, ModMatrix m, std::size_t cols);

std::size_t rank(const PrimeField& field, const ModMatrix& m, std::size_t cols);

// Basis of {v : m v = 0}, one vector per free column in increasing order.
ModMatrix kernel_basis(const PrimeField& field, const ModMatrix& m,
                       std::size_t cols);

ModMatrix transpose(const ModMatrix& m, std::size_t cols);

// Columns `cols` of m, in the given order.
ModMatrix select_columns(const ModMatrix& m,
                         const std::vector<std::size_t>& cols);

bool is_zero(const ModVector& v) noexcept;

}  // namespace sidlab

#endif  // SIDLAB_LINALG_H_
