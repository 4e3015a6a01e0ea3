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

// Acceptance runner: one PASS/FAIL line per criterion, checked against
// independent oracles where they are cheap enough to run.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.h"
#include "sidlab/analysis.h"
#include "sidlab/certificate.h"
#include "sidlab/constructions.h"
#include "sidlab/error.h"
#include "sidlab/io.h"

namespace {

using namespace sidlab;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Criterion 1.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  double worst = 0.0, worst_brute = 0.0;
  int pairs = 0, brute = 0;
  while (pairs < 200) {
    const std::int64_t p = (rng() % 2) ? 3 : 5;
    const std::size_t n = 1 + rng() % 2;
    const std::size_t t = 2 + rng() % 5;
    const std::size_t c = 1 + rng() % std::min<std::size_t>(2, t - 1);
    oracle::Matrix raw;
    const auto sys = oracle::random_system(rng, p, c, t, &raw);
    if (!sys) continue;
    const std::uint64_t size = oracle::ipow(p, n);
    const auto v = oracle::random_values(rng, size, pairs % 3 != 0);
    const GridFunction f(p, n, v);
    const Complex d = t_direct(*sys, f);
    worst = std::max(worst, std::abs(d - t_fourier(*sys, dft(f))));
    if (oracle::ipow(size, t) <= 200'000) {
      worst_brute = std::max(worst_brute, std::abs(d - oracle::brute_t(raw, p, n, v)));
      ++brute;
    }
    ++pairs;
  }
  return {worst <= 1e-8 && worst_brute <= 1e-8,
          "max |direct - fourier| = " + fmt_double(worst) + "; max |direct - brute| = " +
              fmt_double(worst_brute) + " on " + std::to_string(brute) + " pairs"};
}

const oracle::Matrix kEx41 = {{1, -1, 1, -1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, -1, 1, -1, 1}};
const oracle::Matrix kEx42 = {{1, -1, 1, -1, 0}, {1, 2, -1, 0, -2}};
const oracle::Matrix kEx43 = {{1, -1, 2, -2, 1, 1, 1, 1}, {0, 0, 0, 0, 1, -1, 2, -2}};

std::vector<Complex> shifted(const GridFunction& f, double alpha, double eps) {
  std::vector<Complex> v(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) v[x] = alpha + eps * f[x];
  return v;
}

// Criteria 2 and 4: T(alpha + eps f) >= alpha^t, with an independent brute-force
// recomputation of every sample.
Outcome box_inequality(Example e, const oracle::Matrix& raw, std::uint64_t seed) {
  const std::vector<double> alphas{0.3, 0.5, 0.9};
  const std::size_t samples = 100;
  const double t = static_cast<double>(raw[0].size());
  double margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 seeds(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const double alpha = alphas[i % alphas.size()];
    const GridFunction f = box_sample(5, 1, alpha, seeds());
    const double lhs = oracle::brute_t(raw, 5, 1, shifted(f, alpha, alpha / 2)).real();
    margin = std::min(margin, lhs - std::pow(alpha, t));
  }
  std::string detail = "brute-force min margin " + fmt_double(margin);
  bool ok = margin >= -1e-15;
  try {
    ExampleOptions opts;
    opts.alphas = alphas;
    const Certificate c = verify_example(e, 5, 1, samples, seed, opts);
    detail += "; pipeline margin " + fmt_double(c.margin);
    if (!reverify(c).ok) ok = false, detail += "; reverify failed";
  } catch (const Error& err) {
    ok = false;
    detail += std::string("; pipeline: ") + err.what();
  }
  return {ok, detail};
}

Outcome example41() {
  std::vector<Complex> ind(5, 0.0);
  ind[1] = 1.0;
  const double brute = oracle::brute_t(kEx41, 5, 1, ind).real();
  const std::uint64_t member = 1;
  const Rational exact = t_direct_exact(example_system(Example::kEx41, 5),
                                        GridFunction::indicator(5, 1, std::span(&member, 1)));
  Outcome o = box_inequality(Example::kEx41, kEx41, 4101);
  o.pass = o.pass && exact == 0 && brute == 0.0;
  o.detail = "T(1_{1}) = " + to_string(exact) + " (brute " + fmt_double(brute) + "); " + o.detail;
  return o;
}

// Criterion 3: the chain sum_{|S|=4} T_{Phi(S)}(f) >= sum_h |f^(h)|^2 |f^(2h)|^2 >= 0,
// recomputed with direct kernel enumeration and a naive transform.
Outcome example42() {
  bool ok = true;
  double min_gap = std::numeric_limits<double>::infinity();
  double min_lhs = std::numeric_limits<double>::infinity();
  std::string detail;
  for (std::int64_t p : {5, 7}) {
    for (std::size_t n : {1u, 2u}) {
      const LinearSystem sys = example_system(Example::kEx42, p);
      std::vector<LinearSystem> subs;
      for_each_k_subset(5, 4, [&](const SubsystemSelector& s) { subs.push_back(subsystem(sys, s)); });
      const GridIndex grid(p, n);
      std::mt19937_64 seeds(4200 + 10 * p + n);
      for (int i = 0; i < 100; ++i) {
        const GridFunction f = box_sample(p, n, 0.5, seeds());
        double lhs = 0.0;
        for (const auto& s : subs) lhs += t_direct(s, f).real();
        const std::vector<Complex> v(f.values().begin(), f.values().end());
        const auto hat = oracle::naive_dft(v, p, n);
        double rhs = 0.0;
        for (std::uint64_t h = 0; h < grid.size(); ++h) {
          rhs += std::norm(hat[h]) * std::norm(hat[grid.scale(2, h)]);
        }
        min_gap = std::min(min_gap, lhs - rhs);
        min_lhs = std::min(min_lhs, lhs);
        if (lhs < rhs - 1e-15 || rhs < 0.0 || !(lhs > 0.0)) ok = false;
      }
      try {
        verify_example(Example::kEx42, p, n, 100, 4200 + p + n);
      } catch (const Error& err) {
        ok = false;
        detail += std::string(" pipeline: ") + err.what();
      }
    }
  }
  return {ok, "min(lhs - rhs) = " + fmt_double(min_gap) + ", min lhs = " + fmt_double(min_lhs) +
                  " over 400 samples" + detail};
}

// Criterion 5.
Outcome generic_witness() {
  const LinearSystem psi = example_system(Example::kEx42, 5);
  // Phi: the projection onto forms 2..5, whose coefficients are not all +-1.
  const std::vector<std::int64_t> row = subsystem(psi, SubsystemSelector({1, 2, 3, 4})).matrix()[0];
  const WitnessResult r = generic_linear_witness(psi, row, 2);
  const double t_phi = std::abs(t_direct(LinearSystem::create(5, {row}), r.function));
  const double t_psi = t_direct(psi, r.function).real();
  const bool ok = t_phi <= 1e-9 && t_psi >= 2.0 / 1e5 - 1e-9;
  return {ok, "T_Phi = " + fmt_double(t_phi) + ", T_Psi = " + fmt_double(t_psi) + " (bound 2e-05)"};
}

// Criterion 6.
Outcome quadratic() {
  const LinearSystem psi = LinearSystem::create(5, oracle::generic_matrix(5, 5), "generic5");
  bool ok = is_linearly_generic(psi);
  std::string detail;
  try {
    const WitnessResult r = quadratic_witness(psi, 2);
    const GridFunction& f = r.function;
    const double t_phi = t_direct(additive_tuple_system(5, 4), f).real();
    const double t_psi = t_direct(psi, f).real();
    ok = ok && f.is_real(0.0) && f.max_abs() <= 1.0 + 1e-9 && std::abs(f.mean()) <= 1e-12 &&
         t_phi < std::pow(5.0, -2.0) && std::abs(t_psi) > 0.0;
    detail = "max|f| = " + fmt_double(f.max_abs()) + ", |Ef| = " + fmt_double(std::abs(f.mean())) +
             ", T_Phi = " + fmt_double(t_phi) + " < 0.04, |T_Psi| = " + fmt_double(std::abs(t_psi));
  } catch (const Error& err) {
    ok = false;
    detail = err.what();
  }
  std::mt19937_64 rng(6006);
  double worst = -1.0;
  for (int i = 0; i < 200; ++i) {
    const std::int64_t p = std::array<std::int64_t, 3>{3, 5, 7}[rng() % 3];
    const std::size_t n = 1 + rng() % 3;
    ModMatrix q(n, ModVector(n));
    ModVector h(n);
    for (auto& row : q) for (auto& x : row) x = static_cast<std::int64_t>(rng() % p);
    for (auto& x : h) x = static_cast<std::int64_t>(rng() % p);
    Complex ref = 0.0;
    const std::uint64_t size = oracle::ipow(p, n);
    for (std::uint64_t x = 0; x < size; ++x) {
      const auto d = oracle::digits(x, p, n);
      std::int64_t e = 0;
      for (std::size_t a = 0; a < n; ++a) {
        e += h[a] * d[a];
        for (std::size_t b = 0; b < n; ++b) e += q[a][b] * d[a] * d[b];
      }
      ref += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(oracle::mod(e, p)) / p);
    }
    ref /= static_cast<double>(size);
    oracle::Matrix sym(n, std::vector<std::int64_t>(n));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) sym[a][b] = q[a][b] + q[b][a];
    }
    const double r = static_cast<double>(oracle::rank_by_counting(sym, p, n));
    const GaussSum g = gauss_sum(p, n, q, h);
    worst = std::max(worst, std::abs(ref) - std::pow(static_cast<double>(p), -r / 2.0));
    if (std::abs(g.value - ref) > 1e-12 || g.rank != static_cast<std::size_t>(r)) ok = false;
  }
  ok = ok && worst <= 1e-9;
  return {ok, detail + "; Gauss sums: max(|E e(q)| - p^{-r/2}) = " + fmt_double(worst)};
}

Rational generic_s_sum(std::int64_t p, std::int64_t t) {
  Rational acc = 0;
  BigInt binom = 1;
  for (std::int64_t s = 0; s <= t; ++s) {
    if (s > 0) binom = binom * (t - s + 1) / s;
    acc += Rational(binom) * rational_pow(-p, s - t) * rational_pow(p, -std::min<std::int64_t>(s, 3));
  }
  return acc;
}

// Criterion 7.
Outcome m2_sum() {
  std::mt19937_64 rng(7007);
  bool ok = true;
  int systems = 0;
  while (systems < 20) {
    const std::int64_t p = std::array<std::int64_t, 3>{3, 5, 7}[systems % 3];
    const std::size_t t = 3 + rng() % 6;
    oracle::Matrix raw;
    const auto sys = oracle::random_system(rng, p, 2, t, &raw);
    if (!sys) continue;
    Rational ref = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
      oracle::Matrix cols;
      for (std::size_t i = 0; i < t; ++i) {
        if (mask >> i & 1) {
          cols.push_back({raw[0][i] * raw[0][i], raw[1][i] * raw[1][i], raw[0][i] * raw[1][i]});
        }
      }
      ref += rational_pow(-p, static_cast<std::int64_t>(cols.size()) - static_cast<std::int64_t>(t)) *
             rational_pow(p, -static_cast<std::int64_t>(oracle::rank_by_counting(cols, p, 3)));
    }
    if (m2_rank_sum(*sys).value != ref) ok = false;
    ++systems;
  }
  int pairs = 0, realised = 0;
  for (std::int64_t p : {2, 3, 5, 7, 11}) {
    for (std::int64_t t : {5, 7, 9}) {
      const BigInt n = m2_closed_form_numerator(p, t);
      const Rational predicted = Rational(n) * rational_pow(-p, -t) * rational_pow(p, -3);
      if (n == 0 || predicted != generic_s_sum(p, t)) ok = false;
      ++pairs;
      if (t <= p + 1) {
        const M2RankSum r = m2_rank_sum(LinearSystem::create(p, oracle::generic_matrix(p, t)));
        if (!r.linearly_generic || !r.agree || r.value != predicted) ok = false;
        ++realised;
      }
    }
  }
  return {ok, "20 random systems match the subset oracle; closed form nonzero and matching on " +
                  std::to_string(pairs) + " (p, t) pairs, " + std::to_string(realised) +
                  " realised by generic systems"};
}

// Criterion 8. T_4AP(f) = (sum f^2)^2 / 50 >= 0 for mean-zero f on F_5, so the
// single-coordinate search cannot find a negative value.
Outcome uncommon(std::size_t n_max, double* seconds_out = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    UncommonOptions opts;
    opts.n_max = n_max;
    const Certificate c = uncommon_certificate(four_ap_system(5), kDefaultSeed, opts);
    GridFunction g = c.witness->materialize();
    const GridFunction shifted_up = g.affine(0.5, 1.0);
    const GridFunction shifted_down = g.affine(0.5, -1.0);
    const auto ap = four_ap_system(5);
    const double lhs = t_direct(ap, shifted_up).real() + t_direct(ap, shifted_down).real();
    const Reverification rv = reverify(c);
    o.pass = lhs < 0.125 - 1e-10 && c.k && *c.k <= 8 && rv.ok;
    o.detail = "n = " + std::to_string(*c.n) + ", k = " + std::to_string(*c.k) +
               ", T(1/2+g) + T(1/2-g) = " + fmt_double(lhs) + ", deficit " + fmt_double(0.125 - lhs);
  } catch (const Error& err) {
    o.detail = err.what();
  }
  if (seconds_out) {
    *seconds_out = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return o;
}

// Criterion 9.
Outcome structural() {
  std::mt19937_64 rng(9009);
  double worst[5] = {0, 0, 0, 0, 0};
  int count[5] = {0, 0, 0, 0, 0};
  while (count[0] < 100 || count[1] < 100 || count[4] < 100) {
    const std::int64_t p = (rng() % 2) ? 3 : 5;
    const std::size_t t = 2 + rng() % 3;
    const std::size_t c = 1 + rng() % std::min<std::size_t>(2, t - 1);
    const auto sys = oracle::random_system(rng, p, c, t);
    if (!sys) continue;
    const GridFunction f1(p, 1, oracle::random_values(rng, p, false));
    const GridFunction f2(p, 1, oracle::random_values(rng, p, false));
    const Complex tensor_gap =
        t_direct(*sys, tensor(f1, f2)) - t_direct(*sys, f1) * t_direct(*sys, f2);
    worst[0] = std::max(worst[0], std::abs(tensor_gap));
    ++count[0];
    const std::size_t k = 1 + rng() % 2;
    const double scale = std::pow(static_cast<double>(p), -static_cast<double>(k * sys->dim()));
    worst[1] = std::max(worst[1], std::abs(t_direct(*sys, localise(f1, k)) - scale * t_direct(*sys, f1)));
    ++count[1];
    const GridFunction f(p, 2, oracle::random_values(rng, p * p, false));
    double l2 = 0.0;
    for (const auto& z : f.values()) l2 += std::norm(z);
    worst[2] = std::max(worst[2], std::abs(dft(f).sum_abs_sq() - l2 / static_cast<double>(f.size())));
    ++count[2];
    const GridFunction g(p, 1, oracle::mean_zero(oracle::random_values(rng, p)));
    const double alpha = 0.1 + 0.8 * static_cast<double>(rng() % 1000) / 1000.0;
    const ExpansionTable table = expansion(*sys, alpha, g);
    worst[3] = std::max(worst[3], std::abs(table.total - t_direct(*sys, g.affine(alpha, 1.0))));
    ++count[3];
    // Expansion terms of linearly generic codimension-2 systems.
    const std::size_t tg = 4 + rng() % 3;
    const LinearSystem gen = LinearSystem::create(7, oracle::generic_matrix(7, tg));
    const std::size_t nh = 1 + rng() % 2;
    const GridFunction hh(7, nh, oracle::mean_zero(oracle::random_values(rng, oracle::ipow(7, nh))));
    for (const auto& term : expansion(gen, alpha, hh).terms) {
      if (term.size >= 1 && term.size + 2 <= tg) worst[4] = std::max(worst[4], std::abs(term.value));
    }
    ++count[4];
  }
  const bool ok = *std::max_element(worst, worst + 5) <= 1e-8;
  return {ok, "tensor " + fmt_double(worst[0]) + ", localise " + fmt_double(worst[1]) + ", Parseval " +
                  fmt_double(worst[2]) + ", expansion " + fmt_double(worst[3]) +
                  ", generic vanishing " + fmt_double(worst[4]) + " (" + std::to_string(count[0]) +
                  " inputs each)"};
}

// Criterion 10.
Outcome golden() {
  const std::filesystem::path data = SIDLAB_DATA_DIR;
  bool ok = true;
  std::string mismatched;
  for (const char* name : {"ex41", "ex42", "ex43", "fourap"}) {
    const LinearSystem sys = system_from_json(read_json_file((data / "systems" / (std::string(name) + ".json")).string()));
    const std::string report = dump_json(report_to_json(classify(sys), name));
    std::ifstream in(data / "golden" / (std::string(name) + ".report.json"), std::ios::binary);
    const std::string expected((std::istreambuf_iterator<char>(in)), {});
    if (report != expected) ok = false, mismatched += std::string(" ") + name;
  }
  return {ok, ok ? "4 reports byte-identical" : "mismatch:" + mismatched};
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
  bool known_unattainable = false;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 60, oracle_equivalence},
      {2, "ex41 indicator count and alpha^9 bound", 30, example41},
      {3, "ex42 chain", 60, example42},
      {4, "ex43 alpha^8 bound", 60,
       [] { return box_inequality(Example::kEx43, kEx43, 4301); }},
      {5, "generic linear witness", 30, generic_witness},
      {6, "quadratic witness and Gauss sums", 120, quadratic},
      {7, "M2 rank sum", 10, m2_sum},
      {8, "4AP uncommon at p = 5, n = 1", 300, [] { return uncommon(1); }, true},
      {9, "structural identities", 120, structural},
      {10, "classification golden files", 10, golden},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs <= c.limit_seconds;
    std::printf("%s criterion %d (%s) [%.2f s / %.0f s]: %s%s\n", pass ? "PASS" : "FAIL", c.id,
                c.title, secs, c.limit_seconds, o.detail.c_str(),
                !pass && c.known_unattainable ? " [known unattainable, see README]" : "");
    if (!pass && !c.known_unattainable) ++unexpected;
  }
  double secs = 0.0;
  const Outcome two = uncommon(2, &secs);
  std::printf("INFO criterion 8 at n = 2 [%.2f s]: %s: %s\n", secs, two.pass ? "certified" : "failed",
              two.detail.c_str());
  return unexpected == 0 ? 0 : 1;
}
