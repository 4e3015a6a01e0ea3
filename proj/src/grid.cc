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

#include "sidlab/grid.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sidlab/error.h"
#include "sidlab/prime_field.h"

namespace sidlab {

namespace {

std::uint64_t checked_size(std::int64_t p, std::size_t n) {
  PrimeField field(p);
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    size *= static_cast<std::uint64_t>(p);
    if (size > kMaxGridPoints) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "grid F_" + std::to_string(p) + "^" + std::to_string(n) +
                      " exceeds the dense grid limit");
    }
  }
  return size;
}

std::vector<Complex> roots_of_unity(std::int64_t p, double sign) {
  std::vector<Complex> r(static_cast<std::size_t>(p));
  for (std::int64_t k = 0; k < p; ++k) {
    const double a =
        sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
    r[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
  }
  return r;
}

// Applies the length-p transform with kernel e_p(sign * h * x) along every
// axis.
void transform_axes(std::vector<Complex>& data, std::int64_t p, std::size_t n,
                    double sign) {
  const auto roots = roots_of_unity(p, sign);
  const auto up = static_cast<std::uint64_t>(p);
  std::vector<Complex> in(up), out(up);
  std::uint64_t stride = 1;
  for (std::size_t axis = 0; axis < n; ++axis) {
    const std::uint64_t block = stride * up;
    for (std::uint64_t base = 0; base < data.size(); base += block) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        for (std::uint64_t x = 0; x < up; ++x) in[x] = data[base + off + x * stride];
        for (std::uint64_t h = 0; h < up; ++h) {
          Complex acc = 0.0;
          for (std::uint64_t x = 0; x < up; ++x) acc += in[x] * roots[(h * x) % up];
          out[h] = acc;
        }
        for (std::uint64_t h = 0; h < up; ++h) data[base + off + h * stride] = out[h];
      }
    }
    stride = block;
  }
}

}  // namespace

GridIndex::GridIndex(std::int64_t p, std::size_t n)
    : p_(p), n_(n), size_(checked_size(p, n)) {}

std::vector<std::int64_t> GridIndex::decode(std::uint64_t index) const {
  std::vector<std::int64_t> v(n_);
  const auto up = static_cast<std::uint64_t>(p_);
  for (std::size_t i = 0; i < n_; ++i) {
    v[i] = static_cast<std::int64_t>(index % up);
    index /= up;
  }
  return v;
}

std::uint64_t GridIndex::encode(std::span<const std::int64_t> coords) const {
  std::uint64_t idx = 0;
  for (std::size_t i = coords.size(); i-- > 0;) {
    std::int64_t c = coords[i] % p_;
    if (c < 0) c += p_;
    idx = idx * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(c);
  }
  return idx;
}

std::int64_t GridIndex::dot(std::uint64_t a, std::uint64_t b) const {
  const auto up = static_cast<std::uint64_t>(p_);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    acc += (a % up) * (b % up);
    a /= up;
    b /= up;
  }
  return static_cast<std::int64_t>(acc % up);
}

std::uint64_t GridIndex::add(std::uint64_t a, std::uint64_t b) const {
  const auto up = static_cast<std::uint64_t>(p_);
  std::uint64_t out = 0, place = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    out += ((a % up + b % up) % up) * place;
    a /= up;
    b /= up;
    place *= up;
  }
  return out;
}

std::uint64_t GridIndex::neg(std::uint64_t a) const { return scale(p_ - 1, a); }

std::uint64_t GridIndex::scale(std::int64_t s, std::uint64_t a) const {
  const auto up = static_cast<std::uint64_t>(p_);
  std::int64_t r = s % p_;
  if (r < 0) r += p_;
  const auto us = static_cast<std::uint64_t>(r);
  std::uint64_t out = 0, place = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    out += ((a % up) * us % up) * place;
    a /= up;
    place *= up;
  }
  return out;
}

GridFunction::GridFunction(std::int64_t p, std::size_t n,
                           std::vector<Complex> values, ExactHint hint)
    : index_(p, n), values_(std::move(values)), hint_(hint) {
  if (values_.size() != index_.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "expected " + std::to_string(index_.size()) + " values, got " +
                    std::to_string(values_.size()));
  }
  if (hint_ == ExactHint::kIndicator) {
    for (const auto& v : values_) {
      if (v != Complex(0.0) && v != Complex(1.0)) {
        throw Error(ErrorCode::kInvalidInput, "indicator hint on non-0/1 values");
      }
    }
  }
}

GridFunction GridFunction::constant(std::int64_t p, std::size_t n,
                                    Complex value) {
  GridIndex idx(p, n);
  const bool indicator = value == Complex(0.0) || value == Complex(1.0);
  return GridFunction(p, n, std::vector<Complex>(idx.size(), value),
                      indicator ? ExactHint::kIndicator : ExactHint::kNone);
}

GridFunction GridFunction::indicator(std::int64_t p, std::size_t n,
                                     std::span<const std::uint64_t> members) {
  GridIndex idx(p, n);
  std::vector<Complex> v(idx.size(), 0.0);
  for (auto m : members) {
    if (m >= idx.size()) {
      throw Error(ErrorCode::kInvalidInput, "indicator member out of range");
    }
    v[m] = 1.0;
  }
  return GridFunction(p, n, std::move(v), ExactHint::kIndicator);
}

GridFunction GridFunction::delta(std::int64_t p, std::size_t n) {
  const std::uint64_t zero = 0;
  return indicator(p, n, std::span<const std::uint64_t>(&zero, 1));
}

GridFunction GridFunction::from_real(std::int64_t p, std::size_t n,
                                     std::span<const double> values) {
  return GridFunction(p, n, std::vector<Complex>(values.begin(), values.end()));
}

Complex GridFunction::mean() const {
  Complex acc = 0.0;
  for (const auto& v : values_) acc += v;
  return acc / static_cast<double>(values_.size());
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::max_abs_imag() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
  return m;
}

double GridFunction::l1() const {
  double acc = 0.0;
  for (const auto& v : values_) acc += std::abs(v);
  return acc;
}

bool GridFunction::in_range(double lo, double hi, double tol) const {
  return std::all_of(values_.begin(), values_.end(), [&](const Complex& v) {
    return std::abs(v.imag()) <= tol && v.real() >= lo - tol &&
           v.real() <= hi + tol;
  });
}

GridFunction GridFunction::affine(Complex a, Complex b) const {
  std::vector<Complex> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a + b * values_[i];
  return GridFunction(p(), n(), std::move(out));
}

Spectrum::Spectrum(std::int64_t p, std::size_t n, std::vector<Complex> coeffs)
    : index_(p, n), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != index_.size()) {
    throw Error(ErrorCode::kInvalidInput, "spectrum size mismatch");
  }
}

Spectrum Spectrum::zero(std::int64_t p, std::size_t n) {
  GridIndex idx(p, n);
  return Spectrum(p, n, std::vector<Complex>(idx.size(), 0.0));
}

double Spectrum::sum_abs_sq() const {
  double acc = 0.0;
  for (const auto& c : coeffs_) acc += std::norm(c);
  return acc;
}

double Spectrum::conjugate_asymmetry() const {
  double m = 0.0;
  for (std::uint64_t h = 0; h < coeffs_.size(); ++h) {
    m = std::max(m, std::abs(coeffs_[h] - std::conj(coeffs_[index_.neg(h)])));
  }
  return m;
}

Spectrum dft(const GridFunction& f) {
  std::vector<Complex> data(f.values().begin(), f.values().end());
  transform_axes(data, f.p(), f.n(), -1.0);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
  return Spectrum(f.p(), f.n(), std::move(data));
}

GridFunction idft(const Spectrum& s) {
  std::vector<Complex> data(s.coeffs().begin(), s.coeffs().end());
  transform_axes(data, s.p(), s.n(), 1.0);
  return GridFunction(s.p(), s.n(), std::move(data));
}

GridFunction tensor(const GridFunction& f1, const GridFunction& f2) {
  if (f1.p() != f2.p()) {
    throw Error(ErrorCode::kFieldMismatch, "tensor of functions over different fields");
  }
  GridIndex out_index(f1.p(), f1.n() + f2.n());
  std::vector<Complex> out(out_index.size());
  const std::uint64_t lo = f1.size();
  for (std::uint64_t x = 0; x < out.size(); ++x) out[x] = f1[x % lo] * f2[x / lo];
  const bool exact = f1.exact_hint() == ExactHint::kIndicator &&
                     f2.exact_hint() == ExactHint::kIndicator;
  return GridFunction(f1.p(), f1.n() + f2.n(), std::move(out),
                      exact ? ExactHint::kIndicator : ExactHint::kNone);
}

GridFunction localise(const GridFunction& f, std::size_t k) {
  if (k == 0) return f;
  return tensor(f, GridFunction::delta(f.p(), k));
}

}  // namespace sidlab
