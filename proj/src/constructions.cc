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

#include "sidlab/constructions.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "sidlab/error.h"

namespace sidlab {
namespace {

void require_generic(const LinearSystem& psi) {
  if (psi.codim() != 2 || !is_linearly_generic(psi)) {
    throw Error(ErrorCode::kPreconditionUnmet,
                "system must be linearly generic of codimension 2");
  }
}

Clause make_clause(std::string name, double value, double bound, bool ok) {
  return Clause{std::move(name), value, bound, ok};
}

void enforce(const std::vector<Clause>& clauses, std::string_view what) {
  for (const Clause& c : clauses) {
    if (!c.ok) {
      throw Error(ErrorCode::kVerificationFailed,
                  std::string(what) + ": clause '" + c.name + "' violated (value " +
                      std::to_string(c.value) + ", bound " +
                      std::to_string(c.bound) + ")");
    }
  }
}

// Shared clauses of every sparse-spectrum witness.
void common_clauses(const GridFunction& raw, const Spectrum& s, double tol,
                    std::vector<Clause>& out) {
  const double mean = std::abs(raw.mean());
  out.push_back(make_clause("mean_zero", mean, tol, mean <= tol));
  const double f0 = std::abs(s[0]);
  out.push_back(make_clause("zero_coefficient", f0, tol, f0 <= tol));
  const double imag = raw.max_abs_imag();
  out.push_back(make_clause("real_valued", imag, tol, imag <= tol));
  const double peak = raw.max_abs();
  out.push_back(make_clause("range", peak, 1.0 + tol, peak <= 1.0 + tol));
}

GridFunction real_part(const GridFunction& raw) {
  std::vector<Complex> v(raw.values().begin(), raw.values().end());
  for (Complex& z : v) z = Complex(z.real(), 0.0);
  return GridFunction(raw.p(), raw.n(), std::move(v));
}

FrequencyWitness from_spectrum(const Spectrum& s, Provenance prov,
                               WitnessParameters params) {
  FrequencyWitness w;
  w.p = s.p();
  w.n = s.n();
  w.provenance = prov;
  w.parameters = std::move(params);
  for (std::uint64_t h = 0; h < s.size(); ++h) {
    if (s[h] != Complex(0.0, 0.0)) w.support.emplace_back(h, s[h]);
  }
  return w;
}

ModVector reduce_row(const PrimeField& f, const std::vector<std::int64_t>& row) {
  ModVector out;
  out.reserve(row.size());
  for (std::int64_t a : row) out.push_back(f.reduce(a));
  return out;
}

// Deterministic Fisher-Yates on top of the raw generator output.
template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kGenericLinear: return "GenericLinear";
    case Provenance::kSpecialPM1: return "SpecialPM1";
    case Provenance::kQuadratic: return "Quadratic";
    case Provenance::kTensor: return "Tensor";
  }
  return "?";
}

Spectrum FrequencyWitness::spectrum() const {
  Spectrum s = Spectrum::zero(p, n);
  for (const auto& [h, c] : support) s[h] = c;
  return s;
}

GridFunction FrequencyWitness::function() const {
  return real_part(idft(spectrum()));
}

LinearSystem additive_tuple_system(std::int64_t p, std::size_t k) {
  std::vector<std::int64_t> row(k);
  for (std::size_t i = 0; i < k; ++i) row[i] = (i % 2 == 0) ? 1 : -1;
  return LinearSystem::create(p, {row}, "additive " + std::to_string(k) + "-tuple");
}

WitnessResult generic_linear_witness(const LinearSystem& psi,
                                     const std::vector<std::int64_t>& phi_row,
                                     std::size_t n,
                                     std::optional<std::uint64_t> seed,
                                     const ConstructionOptions& opts) {
  require_generic(psi);
  if (n < 2) {
    throw Error(ErrorCode::kPreconditionUnmet, "n must be at least 2");
  }
  const PrimeField& field = psi.field();
  const ModVector a = reduce_row(field, phi_row);
  if (a.empty() || std::any_of(a.begin(), a.end(), [](auto v) { return v == 0; })) {
    throw Error(ErrorCode::kPreconditionUnmet,
                "equation coefficients must all be nonzero");
  }
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  for (std::size_t i = 0; i < a.size() && !pair; ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i] != a[j] && a[i] != field.neg(a[j])) {
        pair.emplace(i, j);
        break;
      }
    }
  }
  if (!pair) {
    throw Error(ErrorCode::kPreconditionUnmet,
                "no coefficient pair with ratio other than +-1");
  }
  const std::int64_t a1 = a[pair->first];
  const std::int64_t a2 = a[pair->second];

  const GridIndex grid(psi.p(), n);
  std::uint64_t h1 = 1;
  std::uint64_t h2 = static_cast<std::uint64_t>(psi.p());
  if (seed) {
    std::mt19937_64 rng(*seed);
    while (true) {
      h1 = rng() % grid.size();
      h2 = rng() % grid.size();
      const ModMatrix pair_rows{grid.decode(h1), grid.decode(h2)};
      if (rank(field, pair_rows, n) == 2) break;
    }
  }

  const ModMatrix& m = psi.matrix();
  const std::size_t t = psi.t();
  std::vector<std::uint64_t> u(t);
  for (std::size_t i = 0; i < t; ++i) {
    u[i] = grid.add(grid.scale(m[0][i], h1), grid.scale(m[1][i], h2));
  }

  std::vector<Clause> clauses;
  const bool nonzero = std::none_of(u.begin(), u.end(), [](auto v) { return v == 0; });
  clauses.push_back(make_clause("u_nonzero", nonzero ? 0 : 1, 0, nonzero));
  bool separated = true;
  for (std::size_t i = 0; i < t && separated; ++i) {
    const std::uint64_t lhs = grid.scale(a1, u[i]);
    for (std::size_t j = 0; j < t; ++j) {
      const std::uint64_t rhs = grid.scale(a2, u[j]);
      if (lhs == rhs || lhs == grid.neg(rhs)) {
        separated = false;
        break;
      }
    }
  }
  clauses.push_back(make_clause("frequency_separation", separated ? 0 : 1, 0, separated));
  enforce(clauses, "generic linear witness");

  Spectrum s = Spectrum::zero(psi.p(), n);
  const double w = 1.0 / (2.0 * static_cast<double>(t));
  for (std::uint64_t ui : u) {
    s[ui] += w;
    s[grid.neg(ui)] += w;
  }
  const GridFunction raw = idft(s);
  const double tol = opts.tolerance;
  common_clauses(raw, s, tol, clauses);

  const LinearSystem phi = LinearSystem::create(psi.p(), {phi_row});
  const Complex t_phi = t_fourier(phi, s, opts.eval);
  const Complex t_psi = t_fourier(psi, s, opts.eval);
  const double bound = 2.0 / std::pow(2.0 * static_cast<double>(t), static_cast<double>(t));
  clauses.push_back(make_clause("t_phi_zero", std::abs(t_phi), tol, std::abs(t_phi) <= tol));
  clauses.push_back(make_clause("t_psi_lower_bound", t_psi.real(), bound - tol,
                                t_psi.real() >= bound - tol));
  enforce(clauses, "generic linear witness");

  WitnessParameters params;
  params.n = n;
  params.phi_row = phi_row;
  params.h = {h1, h2};
  params.u = u;
  params.seed = seed;
  WitnessResult r{from_spectrum(s, Provenance::kGenericLinear, std::move(params)),
                  real_part(raw), t_phi, t_psi, std::move(clauses), std::nullopt};
  return r;
}

WitnessResult special_pm1_witness(const LinearSystem& psi,
                                  const std::vector<int>& signs,
                                  std::uint64_t seed,
                                  const ConstructionOptions& opts) {
  require_generic(psi);
  if (signs.empty()) {
    throw Error(ErrorCode::kPreconditionUnmet, "empty sign vector");
  }
  std::int64_t plus = 0, minus = 0;
  for (int s : signs) {
    if (s == 1) ++plus;
    else if (s == -1) ++minus;
    else throw Error(ErrorCode::kPreconditionUnmet, "signs must be +1 or -1");
  }
  if (plus == minus) {
    throw Error(ErrorCode::kPreconditionUnmet,
                "equal sign counts: the equation is an additive tuple");
  }
  const std::int64_t l = std::abs(plus - minus);
  const std::int64_t t = static_cast<std::int64_t>(psi.t());
  if (t % l == 0 && (t / l) % 2 == 1) {
    throw Error(ErrorCode::kPreconditionUnmet,
                "t is an odd multiple of l = " + std::to_string(l));
  }

  const PrimeField& field = psi.field();
  const std::int64_t p = psi.p();
  const ModMatrix& m = psi.matrix();
  auto image = [&](std::int64_t y0, std::int64_t y1) {
    ModVector v(static_cast<std::size_t>(t));
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = field.add(field.mul(m[0][i], y0), field.mul(m[1][i], y1));
    }
    return v;
  };

  // Searches im M^T for u with +-u_i distinct and nonzero, such that no other
  // element of the image is a signed permutation of u.
  std::optional<ModVector> chosen;
  for (std::int64_t idx = 1; idx < p * p && !chosen; ++idx) {
    const ModVector u = image(idx % p, idx / p);
    std::unordered_map<std::int64_t, std::pair<std::size_t, int>> where;
    bool ok = true;
    for (std::size_t i = 0; i < u.size() && ok; ++i) {
      if (u[i] == 0) ok = false;
      else if (!where.emplace(u[i], std::pair{i, 1}).second) ok = false;
      else if (!where.emplace(field.neg(u[i]), std::pair{i, -1}).second) ok = false;
    }
    if (!ok) continue;
    ModVector neg_u(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) neg_u[i] = field.neg(u[i]);
    for (std::int64_t jdx = 1; jdx < p * p && ok; ++jdx) {
      const ModVector v = image(jdx % p, jdx / p);
      if (v == u || v == neg_u) continue;
      std::vector<bool> hit(u.size(), false);
      bool perm = true;
      for (std::int64_t vi : v) {
        auto it = where.find(vi);
        if (it == where.end() || hit[it->second.first]) {
          perm = false;
          break;
        }
        hit[it->second.first] = true;
      }
      if (perm) ok = false;
    }
    if (ok) chosen = u;
  }
  if (!chosen) {
    throw Error(ErrorCode::kNoValidU,
                "no orbit-avoiding frequency vector over F_" + std::to_string(p));
  }
  const GridIndex grid(p, 1);
  std::vector<std::uint64_t> u(chosen->begin(), chosen->end());

  static constexpr double kLevels[] = {0.5, 0.625, 0.75, 0.875, 1.0};
  constexpr std::size_t kMaxCandidates = 4096;
  const double tol = opts.tolerance;
  const Complex phase = std::polar(1.0, std::numbers::pi / (2.0 * static_cast<double>(l)));
  const double scale = 1.0 / (2.0 * static_cast<double>(t));

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> candidates;
  const double full = std::pow(5.0, static_cast<double>(t));
  if (t <= 8) {
    std::vector<std::uint64_t> order(static_cast<std::size_t>(full));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    seeded_shuffle(order, rng);
    order.resize(std::min(order.size(), kMaxCandidates));
    for (std::uint64_t code : order) {
      std::vector<double> c(static_cast<std::size_t>(t));
      for (auto& ci : c) {
        ci = kLevels[code % 5];
        code /= 5;
      }
      candidates.push_back(std::move(c));
    }
  } else {
    for (std::size_t k = 0; k < kMaxCandidates; ++k) {
      std::vector<double> c(static_cast<std::size_t>(t));
      for (auto& ci : c) ci = kLevels[rng() % 5];
      candidates.push_back(std::move(c));
    }
  }

  for (const auto& c : candidates) {
    Spectrum s = Spectrum::zero(p, 1);
    for (std::size_t i = 0; i < u.size(); ++i) {
      s[u[i]] = c[i] * phase * scale;
      s[grid.neg(u[i])] = std::conj(s[u[i]]);
    }
    const Complex t_psi = t_fourier(psi, s, opts.eval);
    if (std::abs(t_psi) < 10.0 * tol) continue;

    const GridFunction raw = idft(s);
    std::vector<Clause> clauses;
    common_clauses(raw, s, tol, clauses);
    std::vector<std::int64_t> row(signs.begin(), signs.end());
    const LinearSystem phi = LinearSystem::create(p, {row});
    const Complex t_phi = t_fourier(phi, s, opts.eval);
    clauses.push_back(make_clause("t_phi_zero", std::abs(t_phi), tol, std::abs(t_phi) <= tol));
    clauses.push_back(make_clause("t_psi_nonzero", std::abs(t_psi), 10.0 * tol, true));
    enforce(clauses, "special +-1 witness");

    WitnessParameters params;
    params.n = 1;
    params.phi_row = row;
    params.u = u;
    params.amplitudes = c;
    params.l = l;
    params.seed = seed;
    return WitnessResult{from_spectrum(s, Provenance::kSpecialPM1, std::move(params)),
                         real_part(raw), t_phi, t_psi, std::move(clauses), std::nullopt};
  }
  throw Error(ErrorCode::kCoefficientSearchFailed,
              "no amplitude choice gave |T| >= " + std::to_string(10.0 * tol));
}

GridFunction quadratic_level_set(std::int64_t p, std::size_t n) {
  const GridIndex grid(p, n);
  std::vector<std::uint64_t> members;
  for (std::uint64_t x = 0; x < grid.size(); ++x) {
    std::int64_t q = 0;
    for (std::int64_t xi : grid.decode(x)) q = (q + xi * xi) % p;
    if (q == 0) members.push_back(x);
  }
  return GridFunction::indicator(p, n, members);
}

WitnessResult quadratic_witness(const LinearSystem& psi, std::size_t n,
                                const ConstructionOptions& opts) {
  require_generic(psi);
  const std::size_t t = psi.t();
  if (t < 5 || t % 2 == 0) {
    throw Error(ErrorCode::kPreconditionUnmet, "t must be odd and at least 5");
  }
  if (n == 0) throw Error(ErrorCode::kPreconditionUnmet, "n must be positive");
  const std::int64_t p = psi.p();
  const GridFunction a = quadratic_level_set(p, n);
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  const double denom = std::pow(pd, nd / 2.0) + 1.0;

  Spectrum s = Spectrum::zero(p, n);
  for (std::uint64_t h = 1; h < s.size(); ++h) {
    s[h] = (a[h].real() - 1.0 / pd) / denom;
  }
  const GridFunction raw = idft(s);
  const double tol = opts.tolerance;
  std::vector<Clause> clauses;
  common_clauses(raw, s, tol, clauses);

  const LinearSystem phi = additive_tuple_system(p, t - 1);
  const Complex t_phi = t_fourier(phi, s, opts.eval);
  double norm_sum = 0.0;
  for (const Complex& c : s.coeffs()) norm_sum += std::pow(std::abs(c), static_cast<double>(t - 1));
  const double phi_bound = std::pow(pd, -nd * static_cast<double>(t - 3) / 2.0);
  clauses.push_back(make_clause("t_phi_is_fourier_norm", std::abs(t_phi.real() - norm_sum),
                                tol, std::abs(t_phi.real() - norm_sum) <= tol));
  clauses.push_back(make_clause("t_phi_upper_bound", t_phi.real(), phi_bound,
                                t_phi.real() + tol < phi_bound));

  const FourierSum psi_sum = t_fourier_detailed(psi, s, opts.eval);
  const Complex t_psi = psi_sum.value;
  clauses.push_back(make_clause("t_psi_nonzero", std::abs(t_psi), psi_sum.rounding_bound(),
                                std::abs(t_psi) > psi_sum.rounding_bound()));
  enforce(clauses, "quadratic witness");

  WitnessParameters params;
  params.n = n;
  params.phi_row.assign(phi.matrix()[0].begin(), phi.matrix()[0].end());
  const double constant =
      std::abs(t_psi) * std::pow(pd, nd * (static_cast<double>(t) - 4.0) / 2.0);
  return WitnessResult{from_spectrum(s, Provenance::kQuadratic, std::move(params)),
                       real_part(raw), t_phi, t_psi, std::move(clauses), constant};
}

GaussSum gauss_sum(std::int64_t p, std::size_t n, const ModMatrix& mq,
                   const ModVector& h) {
  if (p == 2) {
    throw Error(ErrorCode::kInvalidInput, "Gauss sums require odd p");
  }
  const PrimeField field(p);
  if (mq.size() != n || h.size() != n ||
      std::any_of(mq.begin(), mq.end(), [n](const ModVector& r) { return r.size() != n; })) {
    throw Error(ErrorCode::kInvalidInput, "quadratic form dimensions do not match n");
  }
  ModMatrix q(n, ModVector(n));
  ModMatrix sym(n, ModVector(n));
  const std::int64_t half = field.inv(2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q[i][j] = field.reduce(mq[i][j]);
      sym[i][j] = field.mul(field.add(field.reduce(mq[i][j]), field.reduce(mq[j][i])), half);
    }
  }
  ModVector lin(n);
  for (std::size_t i = 0; i < n; ++i) lin[i] = field.reduce(h[i]);

  std::vector<Complex> roots(static_cast<std::size_t>(p));
  for (std::int64_t k = 0; k < p; ++k) {
    roots[static_cast<std::size_t>(k)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p));
  }
  const GridIndex grid(p, n);
  Complex acc = 0.0;
  for (std::uint64_t x = 0; x < grid.size(); ++x) {
    const auto v = grid.decode(x);
    std::int64_t e = 0;
    for (std::size_t i = 0; i < n; ++i) {
      e = field.add(e, field.mul(lin[i], v[i]));
      for (std::size_t j = 0; j < n; ++j) {
        e = field.add(e, field.mul(q[i][j], field.mul(v[i], v[j])));
      }
    }
    acc += roots[static_cast<std::size_t>(e)];
  }
  GaussSum g;
  g.value = acc / static_cast<double>(grid.size());
  g.rank = rank(field, sym, n);
  g.bound = std::pow(static_cast<double>(p), -static_cast<double>(g.rank) / 2.0);
  return g;
}

QuadraticIndicatorT indicator_quadratic_t(const LinearSystem& sys, std::size_t n,
                                          const EvalOptions& opts, double tolerance) {
  const std::int64_t p = sys.p();
  const GridFunction a = quadratic_level_set(p, n);
  QuadraticIndicatorT r;
  r.exact = t_direct_exact(sys, a, opts);
  r.value = to_double(r.exact);

  // psi_i(x).psi_i(x) = sum_{j,j'} K_ij K_ij' x_j.x_j' over pairs j <= j'.
  const PrimeField& field = sys.field();
  const ModMatrix k = sys.form_coefficients();
  const std::size_t d = sys.dim();
  ModMatrix vecs;
  for (const ModVector& row : k) {
    ModVector v;
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t jj = j; jj < d; ++jj) {
        const std::int64_t prod = field.mul(row[j], row[jj]);
        v.push_back(j == jj ? prod : field.mul(2, prod));
      }
    }
    vecs.push_back(std::move(v));
  }
  r.k = vecs.empty() || vecs[0].empty() ? 0 : rank(field, vecs, vecs[0].size());
  r.deviation = std::abs(r.value - std::pow(static_cast<double>(p), -static_cast<double>(r.k)));
  r.bound = std::pow(static_cast<double>(p), -static_cast<double>(n) / 2.0);
  r.bound_ok = r.deviation <= r.bound + tolerance;
  return r;
}

BigInt m2_closed_form_numerator(std::int64_t p, std::int64_t t) {
  const BigInt bp = p;
  const BigInt bt = t;
  const BigInt pairs = bt * (bt - 1) / 2;
  const BigInt lead = boost::multiprecision::pow(BigInt(1 - p), static_cast<unsigned>(t));
  return lead + bp * bp * bp * (pairs - bt + 1) - (bp * bp * pairs - bp * bt + 1);
}

M2RankSum m2_rank_sum(const LinearSystem& sys) {
  if (sys.codim() != 2) {
    throw Error(ErrorCode::kWrongCodimension,
                "M^(2) needs codimension 2, got " + std::to_string(sys.codim()));
  }
  const std::size_t t = sys.t();
  if (t > 12) {
    throw Error(ErrorCode::kBudgetExceeded, "subset enumeration limited to t <= 12");
  }
  const std::int64_t p = sys.p();
  const std::int64_t ti = static_cast<std::int64_t>(t);
  M2RankSum r;
  r.value = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
    const std::int64_t size = std::popcount(mask);
    const std::int64_t rk =
        mask == 0 ? 0 : static_cast<std::int64_t>(m2_rank(sys, SubsystemSelector::from_mask(mask)));
    r.value += rational_pow(-p, size - ti) * rational_pow(p, -rk);
  }
  r.closed_form_numerator = m2_closed_form_numerator(p, ti);
  r.linearly_generic = is_linearly_generic(sys);
  const Rational predicted =
      Rational(r.closed_form_numerator) * rational_pow(-p, -ti) * rational_pow(p, -3);
  r.agree = r.value == predicted;
  return r;
}

std::size_t TensorWitness::n() const {
  std::size_t total = 0;
  for (const auto& f : factors) total += f.n();
  return total;
}

GridFunction TensorWitness::materialize() const {
  if (factors.empty()) {
    throw Error(ErrorCode::kInvalidInput, "tensor witness has no factors");
  }
  GridIndex(p(), n());  // validates the total grid size
  GridFunction acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor(acc, factors[i]);
  return acc.affine(0.0, sign);
}

Complex TensorWitness::t_value(const LinearSystem& sys, const EvalOptions& opts) const {
  Complex acc = std::pow(sign, static_cast<double>(sys.t()));
  for (const auto& f : factors) acc *= sidlab::t_value(sys, f, opts);
  return acc;
}

TensorWitnessResult tensor_witness(
    const LinearSystem& psi,
    const std::map<SubsystemSelector, GridFunction>& per_subsystem,
    const ConstructionOptions& opts) {
  const std::size_t t = psi.t();
  const double tol = opts.tolerance;
  if (per_subsystem.empty() || t < 2) {
    throw Error(ErrorCode::kPreconditionUnmet, "no per-subsystem witnesses given");
  }
  TensorWitnessResult out;
  std::vector<Clause>& clauses = out.clauses;
  Complex product = 1.0;
  for (const auto& [sel, f] : per_subsystem) {
    const std::string label = "S(mask=" + std::to_string(sel.mask()) + ")";
    sel.validate(t);
    if (sel.size() != t - 1) {
      throw Error(ErrorCode::kPreconditionUnmet, label + " is not a (t-1)-subset");
    }
    if (f.p() != psi.p()) {
      throw Error(ErrorCode::kFieldMismatch, label + " witness lives over another field");
    }
    if (std::abs(f.mean()) > tol) {
      throw Error(ErrorCode::kPreconditionUnmet, label + " witness is not mean-zero");
    }
    const Complex ts = sidlab::t_value(subsystem(psi, sel), f, opts.eval);
    if (std::abs(ts) > tol) {
      throw Error(ErrorCode::kPreconditionUnmet, label + " witness is not annihilated by Psi(S)");
    }
    const Complex tp = sidlab::t_value(psi, f, opts.eval);
    if (std::abs(tp) <= tol) {
      throw Error(ErrorCode::kPreconditionUnmet, label + " witness has T_Psi = 0");
    }
    out.witness.subsets.push_back(sel);
    out.witness.factors.push_back(f);
    product *= tp;
  }
  if (t % 2 == 1 && product.real() > 0) out.witness.sign = -1.0;
  out.t_psi = out.witness.t_value(psi, opts.eval);

  // Every (t-1)-subsystem must be killed by some factor.
  for_each_k_subset(t, t - 1, [&](const SubsystemSelector& sel) {
    const Complex v = out.witness.t_value(subsystem(psi, sel), opts.eval);
    if (std::abs(v) > tol) {
      throw Error(ErrorCode::kPreconditionUnmet,
                  "no factor annihilates S(mask=" + std::to_string(sel.mask()) + ")");
    }
  });
  clauses.push_back(make_clause("t_psi_sign", out.t_psi.real(), 0.0,
                                t % 2 == 0 || out.t_psi.real() < 0));

  // Direct re-evaluation when the tensored grid is small enough.
  constexpr std::uint64_t kDirectGrid = std::uint64_t{1} << 20;
  const double total = std::pow(static_cast<double>(psi.p()), static_cast<double>(out.witness.n()));
  if (total <= static_cast<double>(kDirectGrid)) {
    try {
      const GridFunction f = out.witness.materialize();
      const Complex direct = sidlab::t_value(psi, f, opts.eval);
      const double diff = std::abs(direct - out.t_psi);
      clauses.push_back(make_clause("multiplicativity", diff, tol, diff <= tol));
      double worst = 0.0;
      for_each_k_subset(t, t - 1, [&](const SubsystemSelector& sel) {
        worst = std::max(worst, std::abs(sidlab::t_value(subsystem(psi, sel), f, opts.eval)));
      });
      clauses.push_back(make_clause("subsystems_vanish", worst, tol, worst <= tol));
      out.direct_check = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetExceeded) throw;
    }
  }
  enforce(clauses, "tensor witness");
  return out;
}

TensorWitnessResult build_tensor_witness(const LinearSystem& psi, std::uint64_t seed,
                                         const ConstructionOptions& opts) {
  require_generic(psi);
  const PrimeField& field = psi.field();
  const std::size_t t = psi.t();
  std::map<SubsystemSelector, GridFunction> parts;
  for_each_k_subset(t, t - 1, [&](const SubsystemSelector& sel) {
    const LinearSystem sub = subsystem(psi, sel);
    const ModVector row = sub.matrix().at(0);
    bool pm1 = true;
    for (std::int64_t a : row) pm1 = pm1 && (a == 1 || a == field.neg(1));
    if (!pm1) {
      std::vector<std::int64_t> r(row.begin(), row.end());
      parts.emplace(sel, generic_linear_witness(psi, r, 2, std::nullopt, opts).function);
      return;
    }
    std::vector<int> signs;
    for (std::int64_t a : row) signs.push_back(a == 1 ? 1 : -1);
    parts.emplace(sel, special_pm1_witness(psi, signs, seed, opts).function);
  });
  return tensor_witness(psi, parts, opts);
}

}  // namespace sidlab
