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

#include "sidlab/linear_system.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "sidlab/error.h"

namespace sidlab {

SubsystemSelector::SubsystemSelector(std::vector<std::size_t> indices)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (indices_.empty()) {
    throw Error(ErrorCode::kInvalidSelector, "empty selector");
  }
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(ErrorCode::kInvalidSelector, "repeated index in selector");
  }
}

SubsystemSelector SubsystemSelector::from_mask(std::uint64_t mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < 64; ++i) {
    if (mask >> i & 1) idx.push_back(i);
  }
  return SubsystemSelector(std::move(idx));
}

SubsystemSelector SubsystemSelector::all(std::size_t t) {
  std::vector<std::size_t> idx(t);
  std::iota(idx.begin(), idx.end(), 0);
  return SubsystemSelector(std::move(idx));
}

std::uint64_t SubsystemSelector::mask() const noexcept {
  std::uint64_t m = 0;
  for (auto i : indices_) m |= std::uint64_t{1} << i;
  return m;
}

void SubsystemSelector::validate(std::size_t t) const {
  if (indices_.back() >= t) {
    throw Error(ErrorCode::kInvalidSelector,
                "index " + std::to_string(indices_.back() + 1) +
                    " out of range for t=" + std::to_string(t));
  }
}

LinearSystem LinearSystem::from_rows(const PrimeField& field, ModMatrix rows,
                                     std::size_t t) {
  RowEchelon e = rref(field, std::move(rows), t);
  ModMatrix kernel = sidlab::kernel_basis(field, e.rows, t);
  return LinearSystem(field, t, std::move(e.rows), std::move(kernel));
}

LinearSystem LinearSystem::full_space(const PrimeField& field, std::size_t t) {
  return from_rows(field, {}, t);
}

LinearSystem LinearSystem::create(
    std::int64_t p, const std::vector<std::vector<std::int64_t>>& rows,
    std::optional<std::string> name) {
  PrimeField field(p);
  if (rows.empty()) throw Error(ErrorCode::kInvalidInput, "no rows given");
  const std::size_t t = rows.front().size();
  if (t == 0) throw Error(ErrorCode::kInvalidInput, "rows have length 0");
  for (const auto& r : rows) {
    if (r.size() != t) {
      throw Error(ErrorCode::kInvalidInput, "rows have unequal lengths");
    }
  }
  LinearSystem sys = from_rows(field, rows, t);
  if (sys.codim() == 0) {
    throw Error(ErrorCode::kZeroRank, "all rows vanish mod p");
  }
  for (std::size_t j = 0; j < t; ++j) {
    bool zero = true;
    for (const auto& r : sys.matrix_) zero = zero && r[j] == 0;
    if (zero) {
      throw Error(ErrorCode::kZeroColumn,
                  "variable " + std::to_string(j + 1) + " is unconstrained");
    }
  }
  for (std::size_t i = 0; i < t; ++i) {
    bool zero = true;
    for (const auto& v : sys.kernel_) zero = zero && v[i] == 0;
    if (zero) {
      throw Error(ErrorCode::kZeroForm,
                  "form " + std::to_string(i + 1) +
                      " vanishes on every solution");
    }
  }
  sys.name_ = std::move(name);
  return sys;
}

ModMatrix LinearSystem::form_coefficients() const {
  return transpose(kernel_, t_);
}

ModMatrix LinearSystem::dual_coefficients() const {
  return transpose(matrix_, t_);
}

bool LinearSystem::contains(const ModVector& x) const {
  for (const auto& row : matrix_) {
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < t_; ++j) acc = field_.add(acc, field_.mul(row[j], x[j]));
    if (acc != 0) return false;
  }
  return true;
}

LinearSystem subsystem(const LinearSystem& sys, const SubsystemSelector& sel) {
  sel.validate(sys.t());
  const auto& keep = sel.indices();
  std::vector<std::size_t> order;
  std::vector<bool> in_sel(sys.t(), false);
  for (auto i : keep) in_sel[i] = true;
  for (std::size_t i = 0; i < sys.t(); ++i) {
    if (!in_sel[i]) order.push_back(i);
  }
  const std::size_t eliminated = order.size();
  order.insert(order.end(), keep.begin(), keep.end());

  // With the eliminated variables ordered first, the echelon rows whose pivot
  // lies among the kept columns are exactly the equations of the projection.
  const RowEchelon e =
      rref(sys.field(), select_columns(sys.matrix(), order), sys.t());
  ModMatrix projected;
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    if (e.pivots[r] < eliminated) continue;
    projected.emplace_back(e.rows[r].begin() + eliminated, e.rows[r].end());
  }
  return LinearSystem::from_rows(sys.field(), std::move(projected), keep.size());
}

bool contains_coordinate_hyperplane(const LinearSystem& sys) {
  if (sys.kind() == SystemKind::kFullSpace) return true;
  const std::size_t t = sys.t();
  for (std::size_t i = 0; i < t; ++i) {
    bool all = true;
    for (std::size_t j = 0; j < t && all; ++j) {
      if (j == i) continue;
      ModVector e(t, 0);
      e[j] = 1;
      all = sys.contains(e);
    }
    if (all) return true;
  }
  return false;
}

bool vanishes_on_mean_zero(const LinearSystem& sys, std::size_t n) {
  const std::size_t c = sys.codim();
  if (c > 2) {
    throw Error(ErrorCode::kCodimTooLarge,
                "codimension " + std::to_string(c) + " > 2");
  }
  if (c == 0) return true;
  const auto& m = sys.matrix();
  const auto& field = sys.field();
  if (n >= c) {
    // Some Y in (F_p^n)^c has trivial left null space, so a fully supported
    // frequency exists unless a column of M is zero.
    for (std::size_t j = 0; j < sys.t(); ++j) {
      bool zero = true;
      for (const auto& r : m) zero = zero && r[j] == 0;
      if (zero) return true;
    }
    return false;
  }
  // c == 2, n == 1: scan the scalar row space.
  const std::int64_t p = sys.p();
  for (std::int64_t y0 = 0; y0 < p; ++y0) {
    for (std::int64_t y1 = 0; y1 < p; ++y1) {
      bool full = true;
      for (std::size_t j = 0; j < sys.t() && full; ++j) {
        full = field.add(field.mul(y0, m[0][j]), field.mul(y1, m[1][j])) != 0;
      }
      if (full) return false;
    }
  }
  return true;
}

bool is_linearly_generic(const LinearSystem& sys) {
  if (sys.codim() != 2) {
    throw Error(ErrorCode::kWrongCodimension,
                "linear genericity needs codimension 2, got " +
                    std::to_string(sys.codim()));
  }
  const auto& m = sys.matrix();
  const auto& f = sys.field();
  for (std::size_t i = 0; i < sys.t(); ++i) {
    for (std::size_t j = i + 1; j < sys.t(); ++j) {
      if (f.sub(f.mul(m[0][i], m[1][j]), f.mul(m[0][j], m[1][i])) == 0) {
        return false;
      }
    }
  }
  return true;
}

std::size_t s_value(const LinearSystem& sys) {
  for (std::size_t k = 1; k <= sys.t(); ++k) {
    bool found = false;
    for_each_k_subset(sys.t(), k, [&](const SubsystemSelector& sel) {
      if (!found && !contains_coordinate_hyperplane(subsystem(sys, sel))) {
        found = true;
      }
    });
    if (found) return k;
  }
  return sys.t() + 1;
}

namespace {

// Exponent vectors of total degree d in `vars` variables, lexicographic.
void monomials(std::size_t vars, int d, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == vars) {
    cur.push_back(d);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur.push_back(e);
    monomials(vars, d - e, cur, out);
    cur.pop_back();
  }
}

std::int64_t multinomial(int d, const std::vector<int>& exps) {
  // d <= 20 keeps every intermediate in range.
  std::int64_t num = 1;
  for (int i = 2; i <= d; ++i) num *= i;
  for (int e : exps) {
    for (int i = 2; i <= e; ++i) num /= i;
  }
  return num;
}

}  // namespace

int complexity(const LinearSystem& sys, int s_max) {
  if (s_max < 1) throw Error(ErrorCode::kInvalidInput, "s_max must be >= 1");
  if (sys.p() <= s_max + 1) {
    throw Error(ErrorCode::kPTooSmall,
                "complexity up to s=" + std::to_string(s_max) +
                    " needs p > " + std::to_string(s_max + 1));
  }
  if (s_max + 1 > 20) throw Error(ErrorCode::kInvalidInput, "s_max too large");
  const auto& f = sys.field();
  const ModMatrix forms = sys.form_coefficients();
  const std::size_t vars = sys.dim();
  for (int s = 1; s <= s_max; ++s) {
    const int d = s + 1;
    std::vector<std::vector<int>> mons;
    std::vector<int> cur;
    monomials(vars, d, cur, mons);
    ModMatrix powers;
    for (const auto& form : forms) {
      ModVector row;
      row.reserve(mons.size());
      for (const auto& mon : mons) {
        std::int64_t c = f.reduce(multinomial(d, mon));
        for (std::size_t j = 0; j < vars; ++j) {
          c = f.mul(c, f.pow(form[j], static_cast<std::uint64_t>(mon[j])));
        }
        row.push_back(c);
      }
      powers.push_back(std::move(row));
    }
    if (rank(f, powers, mons.size()) == sys.t()) return s;
  }
  return s_max + 1;
}

std::vector<SubsystemSelector> find_additive_tuples(const LinearSystem& sys,
                                                    std::size_t k) {
  if (k % 2 != 0) {
    throw Error(ErrorCode::kKOdd, "additive tuples have even length");
  }
  if (k == 0 || k > sys.t()) {
    throw Error(ErrorCode::kInvalidInput,
                "tuple length must lie in [2, t]");
  }
  const std::int64_t minus_one = sys.p() - 1;
  std::vector<SubsystemSelector> out;
  for_each_k_subset(sys.t(), k, [&](const SubsystemSelector& sel) {
    const LinearSystem sub = subsystem(sys, sel);
    if (sub.codim() != 1) return;
    // The echelon row already has its first nonzero entry scaled to 1.
    const auto& row = sub.matrix().front();
    std::size_t plus = 0, minus = 0;
    for (auto v : row) {
      if (v == 1) {
        ++plus;
      } else if (v == minus_one) {
        ++minus;
      } else {
        return;
      }
    }
    // In characteristic 2 the two signs coincide.
    if (sys.p() == 2 || plus == minus) out.push_back(sel);
  });
  return out;
}

bool has_repeated_forms(const LinearSystem& sys) {
  const auto forms = sys.form_coefficients();
  std::set<ModVector> seen(forms.begin(), forms.end());
  return seen.size() != forms.size();
}

std::string_view status_name(PredictedStatus s) {
  switch (s) {
    case PredictedStatus::kNotLocallySidorenko:
      return "NotLocallySidorenko";
    case PredictedStatus::kNotWeaklyLocallySidorenko:
      return "NotWeaklyLocallySidorenko";
    case PredictedStatus::kUndetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

ClassificationReport classify(const LinearSystem& sys) {
  ClassificationReport r;
  r.p = static_cast<std::size_t>(sys.p());
  r.t = sys.t();
  r.codimension = sys.codim();
  r.linearly_generic = sys.codim() == 2 && is_linearly_generic(sys);
  r.s_value = s_value(sys);
  r.complexity_s_max = static_cast<int>(std::min<std::int64_t>(3, sys.p() - 2));
  if (r.complexity_s_max >= 1) {
    r.complexity = complexity(sys, r.complexity_s_max);
  } else {
    r.complexity_s_max = 0;
  }
  bool has_top_tuple = false;
  for (std::size_t k = 2; k <= sys.t(); k += 2) {
    for (auto& sel : find_additive_tuples(sys, k)) {
      if (k + 1 == sys.t()) has_top_tuple = true;
      r.additive_tuples.push_back({std::move(sel), k});
    }
  }

  std::ostringstream why;
  if (sys.codim() != 2) {
    r.predicted_status = PredictedStatus::kUndetermined;
    why << "codimension " << sys.codim() << " != 2";
  } else if (!r.linearly_generic) {
    r.predicted_status = PredictedStatus::kUndetermined;
    why << "codimension 2 but not linearly generic";
  } else if (sys.t() % 2 == 0) {
    r.predicted_status = PredictedStatus::kNotWeaklyLocallySidorenko;
    why << "linearly generic codimension 2 with t=" << sys.t() << " even";
  } else if (!has_top_tuple) {
    r.predicted_status = PredictedStatus::kNotWeaklyLocallySidorenko;
    why << "linearly generic codimension 2, t=" << sys.t()
        << " odd, no additive " << sys.t() - 1 << "-tuple";
    // Subsystems of pure +-1 type need the large-p construction.
    bool needs_large_p = false;
    for_each_k_subset(sys.t(), sys.t() - 1, [&](const SubsystemSelector& sel) {
      const auto sub = subsystem(sys, sel);
      bool pm1 = true;
      for (auto v : sub.matrix().front()) pm1 = pm1 && (v == 1 || v == sys.p() - 1);
      needs_large_p = needs_large_p || pm1;
    });
    if (needs_large_p) why << " (a +-1 subsystem requires p large)";
  } else {
    r.predicted_status = PredictedStatus::kNotLocallySidorenko;
    why << "linearly generic codimension 2, t=" << sys.t()
        << " odd with an additive " << sys.t() - 1 << "-tuple";
  }
  r.justification = why.str();
  return r;
}

ModMatrix m2_matrix(const LinearSystem& sys) {
  if (sys.codim() != 2) {
    throw Error(ErrorCode::kWrongCodimension, "M^(2) needs codimension 2");
  }
  const auto& f = sys.field();
  const auto& m = sys.matrix();
  ModMatrix out(3, ModVector(sys.t()));
  for (std::size_t j = 0; j < sys.t(); ++j) {
    out[0][j] = f.mul(m[0][j], m[0][j]);
    out[1][j] = f.mul(m[1][j], m[1][j]);
    out[2][j] = f.mul(m[0][j], m[1][j]);
  }
  return out;
}

std::size_t m2_rank(const LinearSystem& sys, const SubsystemSelector& sel) {
  sel.validate(sys.t());
  return rank(sys.field(), select_columns(m2_matrix(sys), sel.indices()),
              sel.size());
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPrime: return "NotPrime";
    case ErrorCode::kZeroColumn: return "ZeroColumn";
    case ErrorCode::kZeroRank: return "ZeroRank";
    case ErrorCode::kZeroForm: return "ZeroForm";
    case ErrorCode::kInvalidSelector: return "InvalidSelector";
    case ErrorCode::kCodimTooLarge: return "CodimTooLarge";
    case ErrorCode::kWrongCodimension: return "WrongCodimension";
    case ErrorCode::kPTooSmall: return "PTooSmall";
    case ErrorCode::kKOdd: return "KOdd";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kFieldMismatch: return "FieldMismatch";
    case ErrorCode::kMeanNotZero: return "MeanNotZero";
    case ErrorCode::kRangeViolation: return "RangeViolation";
    case ErrorCode::kVerificationFailed: return "VerificationFailed";
    case ErrorCode::kPreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::kNoValidU: return "NoValidU";
    case ErrorCode::kCoefficientSearchFailed: return "CoefficientSearchFailed";
    case ErrorCode::kNoViolationFound: return "NoViolationFound";
    case ErrorCode::kSearchExhausted: return "SearchExhausted";
    case ErrorCode::kNoQualifyingSubsystem: return "NoQualifyingSubsystem";
    case ErrorCode::kAssertionFailed: return "AssertionFailed";
    case ErrorCode::kNumericalDrift: return "NumericalDrift";
    case ErrorCode::kInvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace sidlab
