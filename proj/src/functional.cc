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

#include "sidlab/functional.h"

#include <cmath>
#include <limits>

#include "image_enumerator.h"
#include "sidlab/error.h"

namespace sidlab {

namespace {

void check_field(const LinearSystem& sys, std::int64_t p) {
  if (sys.p() != p) {
    throw Error(ErrorCode::kFieldMismatch,
                "system over F_" + std::to_string(sys.p()) +
                    ", function over F_" + std::to_string(p));
  }
}

struct ProductSum {
  Complex value = 0.0;
  double abs_sum = 0.0;
  ProductSum& operator+=(const ProductSum& o) {
    value += o.value;
    abs_sum += o.abs_sum;
    return *this;
  }
};

}  // namespace

double default_tolerance(const GridFunction& f) {
  return 1e-9 * std::max(1.0, f.l1());
}

Complex t_direct(const LinearSystem& sys, const GridFunction& f,
                 const EvalOptions& opts) {
  check_field(sys, f.p());
  if (f.exact_hint() == ExactHint::kIndicator) {
    return to_double(t_direct_exact(sys, f, opts));
  }
  const detail::ImageEnumerator image(sys.form_coefficients(), sys.dim(),
                                      sys.p(), f.n());
  image.check_budget(opts.budget, "t_direct");
  const auto values = f.values();
  const std::size_t t = sys.t();
  const Complex sum = image.reduce<Complex>(opts, [&](const std::uint64_t* x) {
    Complex prod = values[x[0]];
    for (std::size_t i = 1; i < t; ++i) prod *= values[x[i]];
    return prod;
  });
  return sum / static_cast<double>(image.count());
}

Rational t_direct_exact(const LinearSystem& sys, const GridFunction& f,
                        const EvalOptions& opts) {
  check_field(sys, f.p());
  if (f.exact_hint() != ExactHint::kIndicator) {
    throw Error(ErrorCode::kInvalidInput,
                "exact counting needs an indicator function");
  }
  const detail::ImageEnumerator image(sys.form_coefficients(), sys.dim(),
                                      sys.p(), f.n());
  image.check_budget(opts.budget, "t_direct");
  std::vector<unsigned char> member(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) member[x] = f[x] == Complex(1.0);
  const std::size_t t = sys.t();
  const std::uint64_t count =
      image.reduce<std::uint64_t>(opts, [&](const std::uint64_t* x) {
        for (std::size_t i = 0; i < t; ++i) {
          if (!member[x[i]]) return std::uint64_t{0};
        }
        return std::uint64_t{1};
      });
  return Rational(BigInt(count), BigInt(image.count()));
}

double FourierSum::rounding_bound() const {
  const double eps = std::numeric_limits<double>::epsilon();
  const double steps = static_cast<double>(t) + static_cast<double>(detail::kBlock) +
                       static_cast<double>(terms / detail::kBlock) + 2.0;
  return steps * eps * abs_sum;
}

FourierSum t_fourier_detailed(const LinearSystem& sys, const Spectrum& s,
                              const EvalOptions& opts) {
  check_field(sys, s.p());
  const detail::ImageEnumerator image(sys.dual_coefficients(), sys.codim(),
                                      sys.p(), s.n());
  image.check_budget(opts.budget, "t_fourier");
  const auto coeffs = s.coeffs();
  const std::size_t t = sys.t();
  const ProductSum sum =
      image.reduce<ProductSum>(opts, [&](const std::uint64_t* h) {
        Complex prod = coeffs[h[0]];
        for (std::size_t i = 1; i < t && prod != Complex(0.0); ++i) {
          prod *= coeffs[h[i]];
        }
        return ProductSum{prod, std::abs(prod)};
      });
  FourierSum out{sum.value, sum.abs_sum, image.count(), t};
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  const double asym = s.conjugate_asymmetry();
  if (asym <= 1e-12 * std::max(scale, 1e-300)) {
    // A conjugate-symmetric spectrum comes from a real function. The residual
    // asymmetry moves each product by at most t asym (scale + asym)^{t-1}.
    const double spill = static_cast<double>(t) * static_cast<double>(out.terms) * asym *
                         std::pow(scale + asym, static_cast<double>(t - 1));
    if (std::abs(out.value.imag()) > 1e-9 * out.abs_sum + out.rounding_bound() + spill) {
      throw Error(ErrorCode::kNumericalDrift,
                  "imaginary part of T for a real function is too large");
    }
  }
  return out;
}

Complex t_fourier(const LinearSystem& sys, const Spectrum& s,
                  const EvalOptions& opts) {
  return t_fourier_detailed(sys, s, opts).value;
}

Complex t_value(const LinearSystem& sys, const GridFunction& f,
                const EvalOptions& opts) {
  if (sys.codim() <= sys.dim()) return t_fourier(sys, dft(f), opts);
  return t_direct(sys, f, opts);
}

ExpansionTable expansion(const LinearSystem& sys, double alpha,
                         const GridFunction& f, const EvalOptions& opts) {
  check_field(sys, f.p());
  if (std::abs(f.mean()) > default_tolerance(f)) {
    throw Error(ErrorCode::kMeanNotZero, "expansion needs a mean-zero function");
  }
  if (sys.t() > 12) {
    throw Error(ErrorCode::kBudgetExceeded, "expansion supports t <= 12");
  }
  const Spectrum s = dft(f);
  const std::size_t t = sys.t();
  ExpansionTable table;
  table.total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
    ExpansionTerm term;
    term.mask = mask;
    term.size = static_cast<std::size_t>(__builtin_popcountll(mask));
    const double weight = std::pow(alpha, static_cast<double>(t - term.size));
    if (mask == 0) {
      term.value = weight;
    } else {
      const LinearSystem sub = subsystem(sys, SubsystemSelector::from_mask(mask));
      term.value = weight * t_fourier(sub, s, opts);
    }
    table.total += term.value;
    table.terms.push_back(term);
  }
  return table;
}

CommonValue common_value(const LinearSystem& sys, const GridFunction& f,
                         const EvalOptions& opts) {
  check_field(sys, f.p());
  if (!f.in_range(0.0, 1.0, default_tolerance(f))) {
    throw Error(ErrorCode::kRangeViolation, "colouring must take values in [0,1]");
  }
  CommonValue out;
  out.value = t_value(sys, f, opts).real() + t_value(sys, f.affine(1.0, -1.0), opts).real();
  out.threshold = std::pow(2.0, 1.0 - static_cast<double>(sys.t()));
  out.deficit = out.threshold - out.value;
  return out;
}

}  // namespace sidlab
