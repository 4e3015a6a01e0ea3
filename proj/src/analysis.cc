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

#include "sidlab/analysis.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "sidlab/constructions.h"
#include "sidlab/error.h"

namespace sidlab {
namespace {

constexpr std::size_t kMaxSubsetForms = 20;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_open_unit(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "alpha must lie in (0, 1)");
  }
}

void require_generic(const LinearSystem& sys) {
  if (sys.codim() != 2 || !is_linearly_generic(sys)) {
    throw Error(ErrorCode::kPreconditionUnmet,
                "system must be linearly generic of codimension 2");
  }
}

void require_subset_budget(const LinearSystem& sys, std::size_t limit) {
  if (sys.t() > limit) {
    throw Error(ErrorCode::kBudgetExceeded,
                "subset enumeration limited to t <= " + std::to_string(limit));
  }
}

// Whether T_S vanishes on every mean-zero function: some variable is free.
bool has_free_form(const LinearSystem& sub) {
  for (std::size_t j = 0; j < sub.t(); ++j) {
    bool zero = true;
    for (const auto& r : sub.matrix()) zero = zero && r[j] == 0;
    if (zero) return true;
  }
  return false;
}

std::string mask_label(std::uint64_t mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t i = 0; i < 64; ++i) {
    if (mask >> i & 1) {
      os << (first ? "" : ",") << i + 1;
      first = false;
    }
  }
  os << '}';
  return os.str();
}

Json mask_list(const std::vector<std::uint64_t>& masks) {
  Json out = Json::array();
  for (std::uint64_t m : masks) {
    Json idx = Json::array();
    for (std::size_t i : SubsystemSelector::from_mask(m).indices()) idx.push_back(i + 1);
    out.push_back(idx);
  }
  return out;
}

// Random real mean-zero function with max |f| = 1/2 from a sparse spectrum.
Spectrum random_half_spectrum(const GridIndex& grid, std::mt19937_64& rng,
                              bool unit_magnitude) {
  std::vector<std::uint64_t> reps;
  for (std::uint64_t h = 1; h < grid.size(); ++h) {
    if (h <= grid.neg(h)) reps.push_back(h);
  }
  Spectrum s = Spectrum::zero(grid.p(), grid.n());
  const std::size_t m = 1 + static_cast<std::size_t>(rng() % reps.size());
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t h = reps[rng() % reps.size()];
    const double mag = unit_magnitude ? 1.0 : uniform01(rng);
    const double phase = 2.0 * std::numbers::pi * uniform01(rng);
    const std::uint64_t nh = grid.neg(h);
    if (nh == h) {
      s[h] = mag * std::cos(phase);
    } else {
      s[h] = std::polar(mag, phase);
      s[nh] = std::conj(s[h]);
    }
  }
  const GridFunction f = idft(s);
  const double peak = f.max_abs();
  if (peak > 0) {
    for (std::uint64_t h = 0; h < s.size(); ++h) s[h] *= 0.5 / peak;
  }
  return s;
}

GridFunction real_function(const Spectrum& s) {
  const GridFunction raw = idft(s);
  std::vector<Complex> v(raw.values().begin(), raw.values().end());
  for (Complex& z : v) z = Complex(z.real(), 0.0);
  return GridFunction(raw.p(), raw.n(), std::move(v));
}

}  // namespace

WitnessEvaluator::WitnessEvaluator(const WitnessRef& w, EvalOptions opts)
    : w_(w), opts_(opts) {
  for (const GridFunction* f : w_.factors()) spectra_.push_back(dft(*f));
}

WitnessEvaluator::Value WitnessEvaluator::evaluate(const LinearSystem& sys) const {
  const auto factors = w_.factors();
  Complex value = 1.0;
  double abs_sum = 1.0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (sys.codim() <= sys.dim()) {
      const FourierSum s = t_fourier_detailed(sys, spectra_[j], opts_);
      value *= s.value;
      abs_sum *= s.abs_sum;
    } else {
      value *= t_direct(sys, *factors[j], opts_);
      abs_sum *= std::pow(factors[j]->max_abs(), static_cast<double>(sys.t()));
    }
  }
  const double t = static_cast<double>(sys.t());
  const double scale = std::pow(w_.scale() * w_.sign(), t) *
                       std::pow(static_cast<double>(w_.p()),
                                -static_cast<double>(w_.localise_k() * sys.dim()));
  return Value{value * scale, abs_sum * std::abs(scale)};
}

Perturbation perturbation(const LinearSystem& sys, double alpha, double eps,
                          const WitnessEvaluator& w) {
  require_subset_budget(sys, kMaxSubsetForms);
  const std::size_t t = sys.t();
  Perturbation out;
  out.by_size.assign(t + 1, 0.0);
  double scale = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t); ++mask) {
    const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    const auto v = w.evaluate(subsystem(sys, SubsystemSelector::from_mask(mask)));
    const double coef = std::pow(alpha, static_cast<double>(t - size)) *
                        std::pow(eps, static_cast<double>(size));
    out.by_size[size] += coef * v.value.real();
    scale += coef * v.abs_sum;
  }
  for (double d : out.by_size) out.delta += d;
  out.tolerance = 1e-9 * scale;
  return out;
}

Deficit common_deficit(const LinearSystem& sys, const WitnessEvaluator& w) {
  require_subset_budget(sys, kMaxSubsetForms);
  const std::size_t t = sys.t();
  Deficit out;
  double scale = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t); ++mask) {
    const int size = std::popcount(mask);
    if (size % 2 != 0) continue;
    const auto v = w.evaluate(subsystem(sys, SubsystemSelector::from_mask(mask)));
    const double coef = std::ldexp(1.0, 1 + size - static_cast<int>(t));
    out.deficit -= coef * v.value.real();
    scale += coef * v.abs_sum;
  }
  out.tolerance = 1e-9 * scale;
  return out;
}

Certificate weak_local_violation(const LinearSystem& sys, const WitnessRef& witness,
                                 double alpha, const AnalysisOptions& opts) {
  require_open_unit(alpha);
  require_generic(sys);
  require_subset_budget(sys, kMaxSubsetForms);
  const double tol = opts.tolerance;
  if (witness.p() != sys.p()) {
    throw Error(ErrorCode::kFieldMismatch, "witness lives over another field");
  }
  if (std::abs(witness.mean()) > tol) {
    throw Error(ErrorCode::kMeanNotZero, "witness must have mean zero");
  }
  const double peak = witness.max_abs();
  if (peak == 0.0) {
    throw Error(ErrorCode::kNoViolationFound, "the zero witness cannot violate anything");
  }
  // Keep alpha + eps w inside [0, 1] for every eps <= 1.
  const double box = std::min(alpha, 1.0 - alpha);
  WitnessRef w = peak > box ? witness.scaled(box / peak) : witness;

  const std::size_t t = sys.t();
  double sub_sum = 0.0, worst = 0.0;
  {
    WitnessEvaluator ev(w, opts.eval);
    for_each_k_subset(t, t - 1, [&](const SubsystemSelector& sel) {
      const double v = ev.evaluate(subsystem(sys, sel)).value.real();
      sub_sum += v;
      worst = std::max(worst, std::abs(v));
    });
    const double top = ev.evaluate(sys).value.real();
    bool flip = false;
    if (worst > tol) {
      if (sub_sum > 0) {
        if (t % 2 == 1) {
          throw Error(ErrorCode::kNoViolationFound,
                      "the (t-1)-subsystem sum is positive and even in the witness");
        }
        flip = true;
      }
    } else if (top >= 0) {
      if (t % 2 == 0 || top == 0) {
        throw Error(ErrorCode::kNoViolationFound,
                    "subsystems vanish and T_Psi(w) is not negative");
      }
      flip = true;
    }
    if (flip) {
      w = w.scaled(-1.0);
      sub_sum = t % 2 == 0 ? -sub_sum : sub_sum;
    }
  }

  const WitnessEvaluator ev(w, opts.eval);
  const double at = std::pow(alpha, static_cast<double>(t));
  for (int j = 1; j <= 30; ++j) {
    const double eps = std::ldexp(alpha, -j);
    const Perturbation pert = perturbation(sys, alpha, eps, ev);
    if (-pert.delta > pert.tolerance) {
      Certificate c(CertificateKind::kNotWeaklyLocallySidorenko, sys);
      c.witness = w;
      c.alpha = alpha;
      c.epsilon = eps;
      c.n = w.n();
      c.lhs = at + pert.delta;
      c.rhs = at;
      c.margin = -pert.delta;
      c.tolerance = pert.tolerance;
      c.details["subsystem_sum"] = sub_sum;
      c.details["t_psi"] = ev.evaluate(sys).value.real();
      c.details["factored"] = w.is_factored();
      return c;
    }
  }
  throw Error(ErrorCode::kNoViolationFound,
              "no eps in alpha/2 .. alpha/2^30 gave a strict violation");
}

GridFunction odd_order_witness(const LinearSystem& sys, std::size_t n,
                               std::uint64_t seed, std::uint64_t budget,
                               const AnalysisOptions& opts) {
  const std::size_t t = sys.t();
  if (t < 2) throw Error(ErrorCode::kInvalidInput, "need at least two forms");
  std::vector<LinearSystem> subs;
  for_each_k_subset(t, t - 1, [&](const SubsystemSelector& sel) {
    subs.push_back(subsystem(sys, sel));
  });
  const GridIndex grid(sys.p(), n);
  std::mt19937_64 rng(seed);
  for (std::uint64_t it = 0; it < budget; ++it) {
    Spectrum s = random_half_spectrum(grid, rng, false);
    double sum = 0.0;
    for (const auto& sub : subs) sum += t_fourier(sub, s, opts.eval).real();
    if (std::abs(sum) <= 1e3 * opts.tolerance) continue;
    if (sum > 0) {
      if ((t - 1) % 2 == 0) continue;
      for (std::uint64_t h = 0; h < s.size(); ++h) s[h] = -s[h];
    }
    return real_function(s);
  }
  throw Error(ErrorCode::kSearchExhausted,
              "no witness with a negative (t-1)-subsystem sum");
}

Certificate local_violation_schedule(const LinearSystem& sys, double alpha, double eps,
                                     const ScheduleOptions& opts) {
  require_open_unit(alpha);
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "eps must lie in (0, 1]");
  }
  require_generic(sys);
  const std::size_t t = sys.t();
  if (t < 5 || t % 2 == 0) {
    throw Error(ErrorCode::kPreconditionUnmet, "t must be odd and at least 5");
  }
  const double tol = opts.analysis.tolerance;
  const double pd = static_cast<double>(sys.p());
  const double box = std::min(alpha, 1.0 - alpha);
  const double at = std::pow(alpha, static_cast<double>(t));
  const LinearSystem phi = additive_tuple_system(sys.p(), t - 1);

  std::optional<double> last_c;
  double last_r = 1.0;
  std::size_t last_n = 0;
  Json tried = Json::array();
  for (std::size_t n = 1; n <= opts.n_max; ++n) {
    const double grid = std::pow(pd, static_cast<double>(n));
    if (grid > static_cast<double>(kMaxGridPoints) ||
        grid * grid > static_cast<double>(opts.analysis.eval.budget)) {
      break;
    }
    const WitnessResult q =
        quadratic_witness(sys, n, ConstructionOptions{tol, opts.analysis.eval});
    const double r = std::min(1.0, box / q.function.max_abs());
    WitnessRef w = WitnessRef::dense(q.function).scaled(r);
    const double t_phi = q.t_phi.real();

    const WitnessEvaluator probe(w, opts.analysis.eval);
    if (probe.evaluate(sys).value.real() > 0) w = w.scaled(-1.0);
    const WitnessEvaluator ev(w, opts.analysis.eval);
    // Hoelder: |T_{Psi(S)}(f)| <= T_Phi(f) for every (t-1)-subset.
    for_each_k_subset(t, t - 1, [&](const SubsystemSelector& sel) {
      const double v = std::abs(t_value(subsystem(sys, sel), q.function, opts.analysis.eval));
      if (v > t_phi + tol) {
        throw Error(ErrorCode::kAssertionFailed,
                    "Hoelder bound violated at n = " + std::to_string(n));
      }
    });
    const Perturbation pert = perturbation(sys, alpha, eps, ev);
    tried.push_back(Json{{"n", n}, {"delta", pert.delta},
                         {"measured_constant", *q.measured_constant}});
    last_c = q.measured_constant;
    last_r = r;
    last_n = n;
    if (-pert.delta > std::max(pert.tolerance, 0.0) && -pert.delta > 0.0) {
      Certificate c(CertificateKind::kNotLocallySidorenko, sys);
      c.witness = w;
      c.alpha = alpha;
      c.epsilon = eps;
      c.n = n;
      c.lhs = at + pert.delta;
      c.rhs = at;
      c.margin = -pert.delta;
      c.tolerance = pert.tolerance;
      c.details["measured_constant"] = *q.measured_constant;
      c.details["t_phi"] = t_phi;
      c.details["schedule"] = tried;
      return c;
    }
  }
  std::ostringstream msg;
  msg << "grid budget reached after n = " << last_n;
  if (last_c && *last_c > 0) {
    // alpha^t + t alpha e^{t-1} p^{-n(t-3)/2} < alpha^t + e^t c p^{-n(t-4)/2}
    // with e = eps * r, i.e. p^{n/2} > t alpha / (e c).
    const double ratio = static_cast<double>(t) * alpha / (eps * last_r * *last_c);
    const double projected = std::max(static_cast<double>(last_n + 1),
                                      std::ceil(2.0 * std::log(ratio) / std::log(pd)));
    msg << "; projected crossover n ~ " << projected << " (measured c = " << *last_c << ")";
  }
  throw Error(ErrorCode::kBudgetExceeded, msg.str());
}

SearchResult negative_t_search(const std::vector<LinearSystem>& systems, std::size_t n,
                               std::uint64_t budget, std::uint64_t seed,
                               const AnalysisOptions& opts) {
  if (systems.empty()) throw Error(ErrorCode::kInvalidInput, "no systems given");
  const std::int64_t p = systems.front().p();
  for (const auto& s : systems) {
    if (s.p() != p) throw Error(ErrorCode::kFieldMismatch, "systems over different fields");
    if (s.t() != 4 || s.codim() != 2 || s_value(s) != 3) {
      throw Error(ErrorCode::kPreconditionUnmet,
                  "each system must have 4 forms, codimension 2 and s = 3");
    }
  }
  const GridIndex grid(p, n);
  if (grid.size() < 2) throw Error(ErrorCode::kInvalidInput, "grid too small");
  std::mt19937_64 rng(seed);
  std::vector<double> values(systems.size());
  for (std::uint64_t it = 0; it < budget; ++it) {
    const Spectrum s = random_half_spectrum(grid, rng, false);
    bool ok = true;
    for (std::size_t i = 0; i < systems.size() && ok; ++i) {
      values[i] = t_fourier(systems[i], s, opts.eval).real();
      ok = values[i] < -opts.tolerance;
    }
    if (ok) return SearchResult{real_function(s), it + 1, values};
  }
  throw Error(ErrorCode::kSearchExhausted,
              "no f with all T < 0 after " + std::to_string(budget) + " candidates at n = " +
                  std::to_string(n));
}

Certificate uncommon_certificate(const LinearSystem& sys, std::uint64_t seed,
                                 const UncommonOptions& opts) {
  require_subset_budget(sys, 12);
  if (has_repeated_forms(sys)) {
    throw Error(ErrorCode::kPreconditionUnmet, "repeated forms are not supported");
  }
  const std::size_t t = sys.t();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint64_t> minimal;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t); ++mask) {
    const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    if (size % 2 != 0) continue;
    const LinearSystem sub = subsystem(sys, SubsystemSelector::from_mask(mask));
    if (sub.dim() == size || has_free_form(sub)) continue;  // T_S(f) = 0
    const std::size_t weight = size + sub.dim();
    if (weight < best) {
      best = weight;
      minimal.clear();
    }
    if (weight == best) minimal.push_back(mask);
  }
  if (minimal.empty()) {
    throw Error(ErrorCode::kNoQualifyingSubsystem,
                "every even subsystem vanishes on mean-zero functions");
  }
  std::vector<LinearSystem> subs;
  bool four_forms = true, two_forms = true;
  for (std::uint64_t mask : minimal) {
    subs.push_back(subsystem(sys, SubsystemSelector::from_mask(mask)));
    const LinearSystem& s = subs.back();
    four_forms = four_forms && s.t() == 4 && s.dim() == 2 && s_value(s) == 3;
    two_forms = two_forms && s.t() == 2 && s.dim() == 1;
  }
  if (!four_forms && !two_forms) {
    throw Error(ErrorCode::kNoQualifyingSubsystem,
                "minimal subsystems " + mask_label(minimal.front()) +
                    " are neither 4-form codimension-2 nor 2-form equations");
  }

  const double tol = opts.analysis.tolerance;
  std::optional<GridFunction> f;
  std::size_t n_used = 0;
  std::uint64_t iterations = 0;
  std::string last_error;
  for (std::size_t n = opts.n_min; n <= opts.n_max && !f; ++n) {
    try {
      if (four_forms) {
        SearchResult r = negative_t_search(subs, n, opts.search_budget, seed, opts.analysis);
        f = std::move(r.f);
        iterations = r.iterations;
      } else {
        const GridIndex grid(sys.p(), n);
        std::mt19937_64 rng(seed);
        for (std::uint64_t it = 0; it < opts.search_budget && !f; ++it) {
          const Spectrum s = random_half_spectrum(grid, rng, true);
          double sum = 0.0;
          for (const auto& sub : subs) sum += t_fourier(sub, s, opts.analysis.eval).real();
          if (sum < -tol) {
            f = real_function(s);
            iterations = it + 1;
          }
        }
        if (!f) throw Error(ErrorCode::kSearchExhausted, "random phases exhausted");
      }
      n_used = n;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSearchExhausted) throw;
      last_error = e.what();
    }
  }
  if (!f) {
    throw Error(ErrorCode::kSearchExhausted,
                "no base function for n in [" + std::to_string(opts.n_min) + ", " +
                    std::to_string(opts.n_max) + "]: " + last_error);
  }

  const double rhs = std::ldexp(1.0, 1 - static_cast<int>(t));
  const double pd = static_cast<double>(sys.p());
  for (std::size_t k = 1; k <= opts.k_max; ++k) {
    const double eps = std::pow(pd, -static_cast<double>(k));
    const WitnessRef g = WitnessRef::dense(*f).scaled(eps).localised(k);
    const WitnessEvaluator ev(g, opts.analysis.eval);
    const Deficit d = common_deficit(sys, ev);
    if (!(d.deficit > opts.deficit_tolerance)) continue;

    double lhs = rhs - d.deficit;
    bool direct = false;
    if (std::pow(pd, static_cast<double>(g.n())) <= 65536.0) {
      try {
        const GridFunction h = g.materialize().affine(0.5, 1.0);
        const double v = common_value(sys, h, opts.analysis.eval).value;
        if (std::abs(v - lhs) > 1e-12) {
          throw Error(ErrorCode::kNumericalDrift,
                      "direct and expanded common values disagree");
        }
        lhs = v;
        direct = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kBudgetExceeded) throw;
      }
    }
    Certificate c(CertificateKind::kUncommon, sys);
    c.witness = g;
    c.alpha = 0.5;
    c.epsilon = eps;
    c.n = n_used;
    c.k = k;
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = d.deficit;
    c.tolerance = opts.deficit_tolerance;
    c.seed = seed;
    c.details["minimal_weight"] = best;
    c.details["minimal_subsystems"] = mask_list(minimal);
    c.details["case"] = four_forms ? "four-form negative search" : "two-form random phases";
    c.details["search_iterations"] = iterations;
    c.details["direct_check"] = direct;
    return c;
  }
  throw Error(ErrorCode::kSearchExhausted,
              "deficit stayed below tolerance for k <= " + std::to_string(opts.k_max));
}

std::string_view example_name(Example e) {
  switch (e) {
    case Example::kEx41: return "ex41";
    case Example::kEx42: return "ex42";
    case Example::kEx43: return "ex43";
  }
  return "?";
}

std::optional<Example> example_from_name(std::string_view name) {
  for (Example e : {Example::kEx41, Example::kEx42, Example::kEx43}) {
    if (example_name(e) == name) return e;
  }
  return std::nullopt;
}

LinearSystem example_system(Example e, std::int64_t p) {
  switch (e) {
    case Example::kEx41:
      return LinearSystem::create(
          p, {{1, -1, 1, -1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, -1, 1, -1, 1}}, "ex41");
    case Example::kEx42:
      return LinearSystem::create(p, {{1, -1, 1, -1, 0}, {1, 2, -1, 0, -2}}, "ex42");
    case Example::kEx43:
      return LinearSystem::create(
          p, {{1, -1, 2, -2, 1, 1, 1, 1}, {0, 0, 0, 0, 1, -1, 2, -2}}, "ex43");
  }
  throw Error(ErrorCode::kInvalidInput, "unknown example");
}

LinearSystem four_ap_system(std::int64_t p) {
  return LinearSystem::create(p, {{1, -2, 1, 0}, {0, 1, -2, 1}}, "fourap");
}

GridFunction box_sample(std::int64_t p, std::size_t n, double alpha, std::uint64_t seed) {
  require_open_unit(alpha);
  const GridIndex grid(p, n);
  std::mt19937_64 rng(seed);
  std::vector<double> v(grid.size());
  double mean = 0.0;
  for (double& x : v) {
    x = 2.0 * uniform01(rng) - 1.0;
    mean += x;
  }
  mean /= static_cast<double>(v.size());
  double lo = 0.0, hi = 0.0;
  for (double& x : v) {
    x -= mean;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  double r = 1.0;
  if (lo < 0) r = std::min(r, alpha / -lo);
  if (hi > 0) r = std::min(r, (1.0 - alpha) / hi);
  for (double& x : v) x *= r;
  return GridFunction::from_real(p, n, v);
}

Certificate verify_example(Example e, std::int64_t p, std::size_t n, std::size_t samples,
                           std::uint64_t seed, const ExampleOptions& opts) {
  if (e == Example::kEx42 && (p == 2 || p == 3)) {
    throw Error(ErrorCode::kPreconditionUnmet, "the example assumes p not in {2, 3}");
  }
  if (opts.alphas.empty()) throw Error(ErrorCode::kInvalidInput, "no alpha values");
  const LinearSystem sys = example_system(e, p);
  const EvalOptions& eval = opts.analysis.eval;
  const GridIndex grid(p, n);
  Certificate c(CertificateKind::kExampleVerified, sys);
  c.n = n;
  c.seed = seed;
  c.margin = std::numeric_limits<double>::infinity();

  Json exact = nullptr;
  if (e == Example::kEx41) {
    const std::uint64_t member = 1;
    const GridFunction a = GridFunction::indicator(p, 1, std::span(&member, 1));
    const Rational count = t_direct_exact(sys, a, eval);
    if (count != 0) {
      throw Error(ErrorCode::kAssertionFailed,
                  "T(1_{1}) = " + to_string(count) + " is not zero");
    }
    exact = to_string(count);
  }

  // Sum over h of |f^(h)|^2 |f^(2h)|^2.
  auto cross_norm = [&](const Spectrum& s) {
    double acc = 0.0;
    for (std::uint64_t h = 0; h < s.size(); ++h) {
      acc += std::norm(s[h]) * std::norm(s[grid.scale(2, h)]);
    }
    return acc;
  };
  std::vector<LinearSystem> four_subs;
  if (e == Example::kEx42) {
    for_each_k_subset(5, 4, [&](const SubsystemSelector& sel) {
      four_subs.push_back(subsystem(sys, sel));
    });
  }
  const LinearSystem a1 = additive_tuple_system(p, 4);

  std::mt19937_64 seeds(seed);
  double worst_slack = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double alpha = opts.alphas[i % opts.alphas.size()];
    const double eps = opts.epsilon ? *opts.epsilon : opts.epsilon_ratio * alpha;
    const GridFunction f = box_sample(p, n, alpha, seeds());
    const Spectrum fs = dft(f);
    auto fail = [&](const std::string& what, double lhs, double rhs) {
      std::ostringstream os;
      os.precision(17);
      os << example_name(e) << " sample " << i << " (alpha " << alpha << ", eps " << eps
         << "): " << what << ": " << lhs << " < " << rhs;
      throw Error(ErrorCode::kAssertionFailed, os.str());
    };
    double lhs = 0.0, rhs = 0.0, slack = 0.0;
    if (e == Example::kEx42) {
      for (const auto& sub : four_subs) {
        const FourierSum s = t_fourier_detailed(sub, fs, eval);
        lhs += s.value.real();
        slack += s.rounding_bound();
      }
      rhs = cross_norm(fs);
      slack += 1e-15 * std::max(1.0, rhs);
      if (lhs < rhs - slack) fail("subsystem sum below cross norm", lhs, rhs);
      if (rhs < 0) fail("cross norm negative", rhs, 0.0);
      if (!(lhs > slack)) fail("subsystem sum not positive", lhs, slack);
    } else {
      if (!(eps > 0 && eps <= alpha / 2)) {
        throw Error(ErrorCode::kPreconditionUnmet, "the inequality needs 0 < eps <= alpha/2");
      }
      const FourierSum s = t_fourier_detailed(sys, dft(f.affine(alpha, eps)), eval);
      lhs = s.value.real();
      slack = s.rounding_bound() + 1e-15;
      const double e4 = std::pow(eps, 4);
      double bound;
      if (e == Example::kEx41) {
        rhs = std::pow(alpha, 9);
        const double ta1 = t_fourier(a1, fs, eval).real();
        bound = rhs + e4 * ta1 * (std::pow(alpha, 5) - std::pow(alpha, 4) * eps - std::pow(eps, 5));
      } else {
        rhs = std::pow(alpha, 8);
        bound = rhs + e4 * cross_norm(fs) *
                          (std::pow(alpha, 4) - 4 * alpha * std::pow(eps, 3) - e4);
      }
      if (lhs < rhs - slack) fail("T below alpha^t", lhs, rhs);
      if (lhs < bound - slack) fail("T below the expansion lower bound", lhs, bound);
    }
    worst_slack = std::max(worst_slack, slack);
    if (lhs - rhs < c.margin) {
      c.margin = lhs - rhs;
      c.lhs = lhs;
      c.rhs = rhs;
      if (e != Example::kEx42) c.alpha = alpha, c.epsilon = eps;
    }
  }
  c.tolerance = worst_slack;
  c.details["example"] = std::string(example_name(e));
  c.details["samples"] = samples;
  c.details["alphas"] = opts.alphas;
  if (opts.epsilon) c.details["epsilon"] = *opts.epsilon;
  else c.details["epsilon_ratio"] = opts.epsilon_ratio;
  if (!exact.is_null()) c.details["indicator_count"] = exact;
  return c;
}

}  // namespace sidlab
