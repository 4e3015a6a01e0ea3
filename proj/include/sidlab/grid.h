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

#ifndef SIDLAB_GRID_H_
#define SIDLAB_GRID_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sidlab {

using Complex = std::complex<double>;

// Bijection between F_p^n and [0, p^n) by little-endian base-p digits:
// coordinate 0 is the least significant digit.
class GridIndex {
 public:
  GridIndex(std::int64_t p, std::size_t n);

  std::int64_t p() const noexcept { return p_; }
  std::size_t n() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return size_; }

  std::vector<std::int64_t> decode(std::uint64_t index) const;
  std::uint64_t encode(std::span<const std::int64_t> coords) const;

  std::int64_t dot(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const;
  std::uint64_t scale(std::int64_t s, std::uint64_t a) const;

 private:
  std::int64_t p_;
  std::size_t n_;
  std::uint64_t size_;
};

// Upper limit on dense grids, in points.
inline constexpr std::uint64_t kMaxGridPoints = std::uint64_t{1} << 26;

enum class ExactHint {
  kNone,
  kIndicator,  // values are exactly 0 or 1
};

// A complex-valued function on F_p^n stored densely in GridIndex order.
class GridFunction {
 public:
  GridFunction(std::int64_t p, std::size_t n, std::vector<Complex> values,
               ExactHint hint = ExactHint::kNone);

  static GridFunction constant(std::int64_t p, std::size_t n, Complex value);
  static GridFunction indicator(std::int64_t p, std::size_t n,
                                std::span<const std::uint64_t> members);
  // 1_{0} on F_p^n.
  static GridFunction delta(std::int64_t p, std::size_t n);
  static GridFunction from_real(std::int64_t p, std::size_t n,
                                std::span<const double> values);

  std::int64_t p() const noexcept { return index_.p(); }
  std::size_t n() const noexcept { return index_.n(); }
  std::uint64_t size() const noexcept { return index_.size(); }
  const GridIndex& index() const noexcept { return index_; }
  ExactHint exact_hint() const noexcept { return hint_; }
  std::span<const Complex> values() const noexcept { return values_; }
  const Complex& operator[](std::uint64_t i) const { return values_[i]; }

  Complex mean() const;
  double max_abs() const;
  double max_abs_imag() const;
  double l1() const;  // sum of |f(x)|
  bool is_real(double tol) const { return max_abs_imag() <= tol; }
  bool in_range(double lo, double hi, double tol) const;

  // a + b f, pointwise.
  GridFunction affine(Complex a, Complex b) const;

 private:
  GridIndex index_;
  std::vector<Complex> values_;
  ExactHint hint_;
};

// Fourier coefficients on F_p^n, same indexing as GridFunction.
class Spectrum {
 public:
  Spectrum(std::int64_t p, std::size_t n, std::vector<Complex> coeffs);

  static Spectrum zero(std::int64_t p, std::size_t n);

  std::int64_t p() const noexcept { return index_.p(); }
  std::size_t n() const noexcept { return index_.n(); }
  std::uint64_t size() const noexcept { return index_.size(); }
  const GridIndex& index() const noexcept { return index_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  const Complex& operator[](std::uint64_t h) const { return coeffs_[h]; }
  Complex& operator[](std::uint64_t h) { return coeffs_[h]; }

  double sum_abs_sq() const;
  // max_h |f^(h) - conj(f^(-h))|.
  double conjugate_asymmetry() const;

 private:
  GridIndex index_;
  std::vector<Complex> coeffs_;
};

// f^(h) = E_x f(x) e_p(-h.x), with e_p(z) = exp(2 pi i z / p).
Spectrum dft(const GridFunction& f);
// f(x) = sum_h f^(h) e_p(h.x).
GridFunction idft(const Spectrum& s);

// (f1 (x) f2)(x) = f1(first n1 coordinates) * f2(last n2 coordinates).
GridFunction tensor(const GridFunction& f1, const GridFunction& f2);
// f (x) 1_{0 in F_p^k}.
GridFunction localise(const GridFunction& f, std::size_t k);

}  // namespace sidlab

#endif  // SIDLAB_GRID_H_
