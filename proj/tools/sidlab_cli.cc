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

// sidlab: classify linear systems, evaluate T, build witnesses and
// certificates, and re-verify them.

#include <fmt/core.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sidlab/analysis.h"
#include "sidlab/certificate.h"
#include "sidlab/constructions.h"
#include "sidlab/error.h"
#include "sidlab/functional.h"
#include "sidlab/io.h"
#include "sidlab/linear_system.h"

namespace {

using namespace sidlab;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  double tolerance = 1e-9;
  std::uint64_t budget = EvalOptions{}.budget;
  unsigned threads = 1;
  std::string output = "-";
  std::string format = "json";

  EvalOptions eval() const { return EvalOptions{budget, threads}; }
  AnalysisOptions analysis() const { return AnalysisOptions{eval(), tolerance}; }
  ConstructionOptions construction() const { return ConstructionOptions{tolerance, eval()}; }

  void validate() const {
    if (!(tolerance > 0)) throw Error(ErrorCode::kInvalidInput, "tolerance must be positive");
    if (budget == 0) throw Error(ErrorCode::kInvalidInput, "budget must be positive");
  }
};

std::string g12(double v) { return fmt::format("{:.12g}", v); }

std::string g12(Complex z) {
  if (z.imag() == 0.0) return g12(z.real());
  return fmt::format("{:.12g}{:+.12g}i", z.real(), z.imag());
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBudgetExceeded:
      return kExitBudget;
    case ErrorCode::kVerificationFailed:
    case ErrorCode::kAssertionFailed:
    case ErrorCode::kNoViolationFound:
    case ErrorCode::kSearchExhausted:
    case ErrorCode::kNoValidU:
    case ErrorCode::kCoefficientSearchFailed:
    case ErrorCode::kNumericalDrift:
      return kExitFailed;
    default:
      return kExitInput;
  }
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidInput, "bad integer list '" + text + "'");
    }
  }
  return out;
}

void emit(const RunConfig& cfg, const Json& j) { write_text_file(cfg.output, dump_json(j)); }

Json clauses_json(const std::vector<Clause>& clauses) {
  Json out = Json::array();
  for (const Clause& c : clauses) {
    out.push_back(Json{{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"ok", c.ok}});
  }
  return out;
}

void print_clauses(const std::vector<Clause>& clauses) {
  for (const Clause& c : clauses) {
    std::cerr << fmt::format("  {:<24} {:>20} bound {:>20}  {}\n", c.name, g12(c.value),
                             g12(c.bound), c.ok ? "ok" : "VIOLATED");
  }
}

Json frequency_witness_json(const WitnessResult& r) {
  const FrequencyWitness& w = r.witness;
  Json params;
  params["n"] = w.parameters.n;
  params["phi_row"] = w.parameters.phi_row;
  if (!w.parameters.h.empty()) params["h"] = w.parameters.h;
  if (!w.parameters.u.empty()) params["u"] = w.parameters.u;
  if (!w.parameters.amplitudes.empty()) params["amplitudes"] = w.parameters.amplitudes;
  if (w.parameters.l != 0) params["l"] = w.parameters.l;
  if (w.parameters.seed) params["seed"] = *w.parameters.seed;
  Json support = Json::array();
  for (const auto& [h, c] : w.support) support.push_back(Json::array({h, complex_to_json(c)}));
  Json j;
  j["provenance"] = std::string(provenance_name(w.provenance));
  j["p"] = w.p;
  j["n"] = w.n;
  j["parameters"] = params;
  j["sparse_spectrum"] = support;
  j["t_phi"] = complex_to_json(r.t_phi);
  j["t_psi"] = complex_to_json(r.t_psi);
  if (r.measured_constant) j["measured_constant"] = *r.measured_constant;
  j["clauses"] = clauses_json(r.clauses);
  return j;
}

// First (t-1)-projection whose coefficients are not all +-1.
std::vector<std::int64_t> default_phi_row(const LinearSystem& psi) {
  std::optional<std::vector<std::int64_t>> row;
  for_each_k_subset(psi.t(), psi.t() - 1, [&](const SubsystemSelector& sel) {
    if (row) return;
    const ModVector r = subsystem(psi, sel).matrix().at(0);
    for (std::int64_t a : r) {
      if (a != 1 && a != psi.field().neg(1)) {
        row.emplace(r.begin(), r.end());
        return;
      }
    }
  });
  if (!row) throw Error(ErrorCode::kPreconditionUnmet, "every projection has +-1 coefficients");
  return *row;
}

void write_dense(const std::string& path, const GridFunction& f) {
  if (path.empty()) return;
  if (path.size() > 4 && path.substr(path.size() - 4) == ".bin") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path);
    write_grid_binary(out, f);
  } else {
    write_text_file(path, dump_json(function_to_json(f)));
  }
}

LinearSystem bundled_system(const std::string& name, std::int64_t p) {
  if (auto e = example_from_name(name)) return example_system(*e, p);
  if (name == "fourap") return four_ap_system(p);
  if (name == "generic5") {
    return LinearSystem::create(p, {{1, 1, 1, 1, 1}, {0, 1, 2, 3, 4}}, "generic5");
  }
  throw Error(ErrorCode::kInvalidInput, "unknown bundled system '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sidorenko-type properties of linear systems over F_p"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  if (const char* env = std::getenv("SIDLAB_BUDGET")) {
    try {
      cfg.budget = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: SIDLAB_BUDGET is not a positive integer\n";
      return kExitInput;
    }
  }
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "verification tolerance")->capture_default_str();
  app.add_option("--budget", cfg.budget, "evaluation budget (terms)")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  app.add_option("-o,--output", cfg.output, "output path ('-' for stdout)");

  // classify
  std::string system_file;
  auto* classify_cmd = app.add_subcommand("classify", "structural classification report");
  classify_cmd->add_option("system", system_file, "system JSON ('-' for stdin)")->required();
  classify_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  // eval
  std::string function_file, method = "both";
  auto* eval_cmd = app.add_subcommand("eval", "evaluate T_Psi(f)");
  eval_cmd->add_option("system", system_file)->required();
  eval_cmd->add_option("function", function_file, "function JSON or .bin grid")->required();
  eval_cmd->add_option("--method", method)->check(CLI::IsMember({"direct", "fourier", "both"}));

  // construct
  std::string witness_kind, phi_row_text, signs_text, dense_out;
  std::size_t n = 2, cert_n = 2, verify_n = 1;
  bool seeded_h = false;
  auto* construct_cmd = app.add_subcommand("construct", "build and verify a witness");
  construct_cmd->add_option("--witness", witness_kind)
      ->required()
      ->check(CLI::IsMember({"generic", "pm1", "quadratic", "tensor"}));
  construct_cmd->add_option("system", system_file)->required();
  construct_cmd->add_option("--n", n, "grid dimension")->capture_default_str();
  construct_cmd->add_option("--phi-row", phi_row_text, "comma-separated equation (generic)");
  construct_cmd->add_option("--signs", signs_text, "comma-separated +-1 signs (pm1)");
  construct_cmd->add_flag("--seeded-h", seeded_h, "random (h1, h2) from the seed (generic)");
  construct_cmd->add_option("--dense-out", dense_out, "also dump f (JSON, or .bin)");
  construct_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "binary"}));

  // certify
  std::string property;
  double alpha = 0.5, eps = 0.5;
  std::size_t n_min = 1, n_max = 2, k_max = 8;
  std::uint64_t search_budget = 100000;
  auto* certify_cmd = app.add_subcommand("certify", "produce a certificate");
  certify_cmd->add_option("--property", property)
      ->required()
      ->check(CLI::IsMember({"weak-local", "local", "uncommon", "negative"}));
  certify_cmd->add_option("system", system_file)->required();
  certify_cmd->add_option("--alpha", alpha)->capture_default_str();
  certify_cmd->add_option("--eps", eps, "perturbation size (local)")->capture_default_str();
  certify_cmd->add_option("--n", cert_n, "grid dimension (weak-local even t, negative)")
      ->capture_default_str();
  certify_cmd->add_option("--n-min", n_min)->capture_default_str();
  certify_cmd->add_option("--n-max", n_max)->capture_default_str();
  certify_cmd->add_option("--k-max", k_max)->capture_default_str();
  certify_cmd->add_option("--search-budget", search_budget)->capture_default_str();

  // verify
  std::string certificate_file, example;
  std::int64_t p = 5;
  std::size_t samples = 100;
  std::vector<double> alphas{0.3, 0.5, 0.9};
  std::optional<double> eps_fixed;
  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate or an example");
  verify_cmd->add_option("certificate", certificate_file, "certificate JSON");
  verify_cmd->add_option("--example", example)->check(CLI::IsMember({"ex41", "ex42", "ex43"}));
  verify_cmd->add_option("--p", p)->capture_default_str();
  verify_cmd->add_option("--n", verify_n)->capture_default_str();
  verify_cmd->add_option("--samples", samples)->capture_default_str();
  verify_cmd->add_option("--alphas", alphas)->capture_default_str();
  verify_cmd->add_option("--eps", eps_fixed, "fixed eps instead of alpha/2");
  verify_cmd->add_option("--certificate-out", dense_out, "write the example certificate");

  // examples
  std::string bundled;
  bool list = false;
  auto* examples_cmd = app.add_subcommand("examples", "print a bundled system");
  examples_cmd->add_option("name", bundled, "ex41 | ex42 | ex43 | fourap | generic5");
  examples_cmd->add_option("--p", p)->capture_default_str();
  examples_cmd->add_flag("--list", list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    cfg.validate();
    if (*classify_cmd) {
      const LinearSystem sys = system_from_json(read_json_file(system_file));
      emit(cfg, report_to_json(classify(sys), sys.name()));
      return kExitOk;
    }

    if (*eval_cmd) {
      const LinearSystem sys = system_from_json(read_json_file(system_file));
      const GridFunction f = read_function_file(function_file);
      std::optional<Complex> direct, fourier;
      if (method != "fourier") {
        try {
          direct = t_direct(sys, f, cfg.eval());
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kBudgetExceeded) throw;
          std::cerr << e.what() << "\nhint: try --method=fourier\n";
          return kExitBudget;
        }
      }
      if (method != "direct") fourier = t_fourier(sys, dft(f), cfg.eval());
      if (direct) std::cout << "direct  " << g12(*direct) << "\n";
      if (fourier) std::cout << "fourier " << g12(*fourier) << "\n";
      if (direct && fourier) std::cout << "delta   " << g12(std::abs(*direct - *fourier)) << "\n";
      return kExitOk;
    }

    if (*construct_cmd) {
      const LinearSystem psi = system_from_json(read_json_file(system_file));
      const ConstructionOptions co = cfg.construction();
      if (witness_kind == "tensor") {
        const TensorWitnessResult r = build_tensor_witness(psi, cfg.seed, co);
        std::cerr << "tensor witness over F_" << psi.p() << "^" << r.witness.n() << ": T_Psi = "
                  << g12(r.t_psi) << (r.direct_check ? " (checked directly)" : "") << "\n";
        print_clauses(r.clauses);
        Json j;
        j["provenance"] = "Tensor";
        j["t_psi"] = complex_to_json(r.t_psi);
        j["direct_check"] = r.direct_check;
        j["clauses"] = clauses_json(r.clauses);
        j["witness"] = witness_to_json(WitnessRef::factored(r.witness));
        emit(cfg, j);
        return kExitOk;
      }
      WitnessResult r = [&] {
        if (witness_kind == "generic") {
          const auto row = phi_row_text.empty() ? default_phi_row(psi) : parse_list(phi_row_text);
          return generic_linear_witness(psi, row, n,
                                        seeded_h ? std::optional(cfg.seed) : std::nullopt, co);
        }
        if (witness_kind == "pm1") {
          if (signs_text.empty()) throw Error(ErrorCode::kInvalidInput, "--signs is required");
          std::vector<int> signs;
          for (auto v : parse_list(signs_text)) signs.push_back(static_cast<int>(v));
          return special_pm1_witness(psi, signs, cfg.seed, co);
        }
        return quadratic_witness(psi, n, co);
      }();
      std::cerr << provenance_name(r.witness.provenance) << " witness over F_" << psi.p() << "^"
                << r.witness.n << ": T_Phi = " << g12(r.t_phi) << ", T_Psi = " << g12(r.t_psi);
      if (r.measured_constant) std::cerr << ", c = " << g12(*r.measured_constant);
      std::cerr << "\n";
      print_clauses(r.clauses);
      if (cfg.format == "binary") {
        if (cfg.output == "-") throw Error(ErrorCode::kInvalidInput, "binary output needs -o");
        write_dense(cfg.output + (cfg.output.ends_with(".bin") ? "" : ".bin"), r.function);
      } else {
        emit(cfg, frequency_witness_json(r));
      }
      write_dense(dense_out, r.function);
      return kExitOk;
    }

    if (*certify_cmd) {
      const LinearSystem sys = system_from_json(read_json_file(system_file));
      const AnalysisOptions ao = cfg.analysis();
      std::optional<Certificate> cert;
      if (property == "weak-local") {
        if (sys.t() % 2 == 1) {
          const TensorWitnessResult tw = build_tensor_witness(sys, cfg.seed, cfg.construction());
          cert = weak_local_violation(sys, WitnessRef::factored(tw.witness), alpha, ao);
        } else {
          const GridFunction f = odd_order_witness(sys, cert_n, cfg.seed, 2000, ao);
          cert = weak_local_violation(sys, WitnessRef::dense(f), alpha, ao);
        }
      } else if (property == "local") {
        ScheduleOptions so{ao, n_max};
        cert = local_violation_schedule(sys, alpha, eps, so);
      } else if (property == "uncommon") {
        UncommonOptions uo;
        uo.analysis = ao;
        uo.n_min = n_min;
        uo.n_max = n_max;
        uo.k_max = k_max;
        uo.search_budget = search_budget;
        cert = uncommon_certificate(sys, cfg.seed, uo);
      } else {
        const SearchResult r = negative_t_search({sys}, cert_n, search_budget, cfg.seed, ao);
        cert.emplace(CertificateKind::kSearchWitness, sys);
        cert->witness = WitnessRef::dense(r.f);
        cert->n = cert_n;
        cert->lhs = r.values.front();
        cert->rhs = 0.0;
        cert->margin = -r.values.front();
        cert->tolerance = cfg.tolerance;
        cert->seed = cfg.seed;
        cert->details["search_iterations"] = r.iterations;
      }
      cert->seed = cfg.seed;
      std::cerr << certificate_kind_name(cert->kind) << ": lhs " << g12(cert->lhs) << ", rhs "
                << g12(cert->rhs) << ", margin " << g12(cert->margin) << "\n";
      emit(cfg, certificate_to_json(*cert));
      return kExitOk;
    }

    if (*verify_cmd) {
      if (!example.empty()) {
        ExampleOptions eo;
        eo.analysis = cfg.analysis();
        eo.alphas = alphas;
        eo.epsilon = eps_fixed;
        const Certificate c = verify_example(*example_from_name(example), p, verify_n, samples,
                                             cfg.seed, eo);
        std::cout << example << ": " << samples << " samples verified, worst margin "
                  << g12(c.margin) << "\n";
        if (!dense_out.empty()) write_text_file(dense_out, dump_json(certificate_to_json(c)));
        return kExitOk;
      }
      if (certificate_file.empty()) {
        throw Error(ErrorCode::kInvalidInput, "give a certificate file or --example");
      }
      const Certificate c = certificate_from_json(read_json_file(certificate_file));
      const Reverification r = reverify(c, cfg.eval());
      std::cout << certificate_kind_name(c.kind) << ": " << (r.ok ? "VERIFIED" : "FAILED") << " ("
                << r.message << "); lhs " << g12(r.recomputed_lhs) << ", margin "
                << g12(r.recomputed_margin) << "\n";
      return r.ok ? kExitOk : kExitFailed;
    }

    if (*examples_cmd) {
      if (list || bundled.empty()) {
        for (const char* name : {"ex41", "ex42", "ex43", "fourap", "generic5"}) {
          std::cout << name << "\n";
        }
        return kExitOk;
      }
      emit(cfg, system_to_json(bundled_system(bundled, p)));
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
