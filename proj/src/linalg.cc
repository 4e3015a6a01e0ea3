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

#include "sidlab/linalg.h"

#include <algorithm>
#include <utility>

namespace sidlab {

RowEchelon rref(const PrimeField& field, ModMatrix m, std::size_t cols) {
  for (auto& row : m) {
    row.resize(cols, 0);
    for (auto& v : row) v = field.reduce(v);
  }
  RowEchelon out;
  std::size_t next = 0;
  for (std::size_t col = 0; col < cols && next < m.size(); ++col) {
    std::size_t pivot = next;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[next], m[pivot]);
    const auto inv = field.inv(m[next][col]);
    for (auto& v : m[next]) v = field.mul(v, inv);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == next || m[r][col] == 0) continue;
      const auto factor = m[r][col];
      for (std::size_t c = col; c < cols; ++c) {
        m[r][c] = field.sub(m[r][c], field.mul(factor, m[next][c]));
      }
    }
    out.pivots.push_back(col);
    ++next;
  }
  m.resize(next);
  out.rows = std::move(m);
  return out;
}

std::size_t rank(const PrimeField& field, const ModMatrix& m,
                 std::size_t cols) {
  return rref(field, m, cols).pivots.size();
}

ModMatrix kernel_basis(const PrimeField& field, const ModMatrix& m,
                       std::size_t cols) {
  const RowEchelon e = rref(field, m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  ModMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    ModVector v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
      v[e.pivots[r]] = field.neg(e.rows[r][free]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

ModMatrix transpose(const ModMatrix& m, std::size_t cols) {
  ModMatrix t(cols, ModVector(m.size(), 0));
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) t[c][r] = m[r][c];
  }
  return t;
}

ModMatrix select_columns(const ModMatrix& m,
                         const std::vector<std::size_t>& cols) {
  ModMatrix out;
  out.reserve(m.size());
  for (const auto& row : m) {
    ModVector r;
    r.reserve(cols.size());
    for (auto c : cols) r.push_back(row[c]);
    out.push_back(std::move(r));
  }
  return out;
}

bool is_zero(const ModVector& v) noexcept {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace sidlab
