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

#include "sidlab/certificate.h"

#include <cmath>

#include "sidlab/analysis.h"
#include "sidlab/error.h"

namespace sidlab {

WitnessRef WitnessRef::dense(GridFunction f) { return WitnessRef(std::move(f)); }

WitnessRef WitnessRef::factored(TensorWitness tw) {
  if (tw.factors.empty()) {
    throw Error(ErrorCode::kInvalidInput, "tensor witness has no factors");
  }
  return WitnessRef(std::move(tw));
}

WitnessRef WitnessRef::scaled(double s) const {
  WitnessRef w = *this;
  w.scale_ *= s;
  return w;
}

WitnessRef WitnessRef::localised(std::size_t extra) const {
  WitnessRef w = *this;
  w.k_ += extra;
  return w;
}

std::vector<const GridFunction*> WitnessRef::factors() const {
  if (base_.index() == 0) return {&std::get<0>(base_)};
  std::vector<const GridFunction*> out;
  for (const auto& f : std::get<1>(base_).factors) out.push_back(&f);
  return out;
}

double WitnessRef::sign() const {
  return base_.index() == 1 ? std::get<1>(base_).sign : 1.0;
}

std::int64_t WitnessRef::p() const { return factors().front()->p(); }

std::size_t WitnessRef::n() const {
  std::size_t total = k_;
  for (const GridFunction* f : factors()) total += f->n();
  return total;
}

double WitnessRef::max_abs() const {
  double acc = std::abs(scale_);
  for (const GridFunction* f : factors()) acc *= f->max_abs();
  return acc;
}

Complex WitnessRef::mean() const {
  Complex acc = scale_ * sign() *
                std::pow(static_cast<double>(p()), -static_cast<double>(k_));
  for (const GridFunction* f : factors()) acc *= f->mean();
  return acc;
}

GridFunction WitnessRef::materialize() const {
  GridIndex(p(), n());  // validates the total size
  GridFunction base = base_.index() == 0 ? std::get<0>(base_)
                                         : std::get<1>(base_).materialize();
  return localise(base, k_).affine(0.0, scale_);
}

Json witness_to_json(const WitnessRef& w) {
  Json j;
  j["representation"] = w.is_factored() ? "tensor" : "dense";
  j["scale"] = w.scale();
  j["localise_k"] = w.localise_k();
  if (!w.is_factored()) {
    j["function"] = function_to_json(w.dense_base());
    return j;
  }
  const TensorWitness& tw = w.tensor_base();
  j["sign"] = tw.sign;
  Json factors = Json::array();
  for (std::size_t i = 0; i < tw.factors.size(); ++i) {
    Json f;
    if (i < tw.subsets.size()) {
      Json idx = Json::array();
      for (std::size_t s : tw.subsets[i].indices()) idx.push_back(s + 1);
      f["subset"] = idx;
    }
    f["function"] = function_to_json(tw.factors[i]);
    factors.push_back(f);
  }
  j["factors"] = factors;
  return j;
}

WitnessRef witness_from_json(const Json& j) {
  try {
    const std::string rep = j.at("representation").get<std::string>();
    std::optional<WitnessRef> w;
    if (rep == "dense") {
      w = WitnessRef::dense(function_from_json(j.at("function")));
    } else if (rep == "tensor") {
      TensorWitness tw;
      tw.sign = j.at("sign").get<double>();
      for (const Json& f : j.at("factors")) {
        if (f.contains("subset")) {
          std::vector<std::size_t> idx;
          for (std::size_t s : f.at("subset").get<std::vector<std::size_t>>()) {
            if (s == 0) throw Error(ErrorCode::kInvalidInput, "subset indices are 1-based");
            idx.push_back(s - 1);
          }
          tw.subsets.emplace_back(std::move(idx));
        }
        tw.factors.push_back(function_from_json(f.at("function")));
      }
      w = WitnessRef::factored(std::move(tw));
    } else {
      throw Error(ErrorCode::kInvalidInput, "unknown witness representation '" + rep + "'");
    }
    return w->scaled(j.at("scale").get<double>()).localised(j.at("localise_k").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed witness: ") + e.what());
  }
}

std::string_view certificate_kind_name(CertificateKind k) {
  switch (k) {
    case CertificateKind::kNotWeaklyLocallySidorenko: return "NotWeaklyLocallySidorenko";
    case CertificateKind::kNotLocallySidorenko: return "NotLocallySidorenko";
    case CertificateKind::kUncommon: return "Uncommon";
    case CertificateKind::kExampleVerified: return "ExampleVerified";
    case CertificateKind::kSearchWitness: return "SearchWitness";
  }
  return "?";
}

CertificateKind certificate_kind_from_name(std::string_view name) {
  for (CertificateKind k :
       {CertificateKind::kNotWeaklyLocallySidorenko, CertificateKind::kNotLocallySidorenko,
        CertificateKind::kUncommon, CertificateKind::kExampleVerified,
        CertificateKind::kSearchWitness}) {
    if (certificate_kind_name(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown certificate kind '" + std::string(name) + "'");
}

Json certificate_to_json(const Certificate& c) {
  Json j;
  j["schema_version"] = kCertificateSchemaVersion;
  j["kind"] = std::string(certificate_kind_name(c.kind));
  j["system"] = system_to_json(c.system);
  Json params = Json::object();
  if (c.alpha) params["alpha"] = *c.alpha;
  if (c.epsilon) params["epsilon"] = *c.epsilon;
  if (c.n) params["n"] = *c.n;
  if (c.k) params["k"] = *c.k;
  j["parameters"] = params;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["margin"] = c.margin;
  j["tolerance"] = c.tolerance;
  j["details"] = c.details;
  j["reproducibility"] = Json{{"seed", c.seed}, {"tool_version", c.tool_version}};
  j["witness"] = c.witness ? witness_to_json(*c.witness) : Json(nullptr);
  return j;
}

Certificate certificate_from_json(const Json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kCertificateSchemaVersion) {
      throw Error(ErrorCode::kInvalidInput,
                  "unsupported certificate schema version " + std::to_string(version));
    }
    Certificate c(certificate_kind_from_name(j.at("kind").get<std::string>()),
                  system_from_json(j.at("system")));
    const Json& params = j.at("parameters");
    if (params.contains("alpha")) c.alpha = params.at("alpha").get<double>();
    if (params.contains("epsilon")) c.epsilon = params.at("epsilon").get<double>();
    if (params.contains("n")) c.n = params.at("n").get<std::size_t>();
    if (params.contains("k")) c.k = params.at("k").get<std::size_t>();
    c.lhs = j.at("lhs").get<double>();
    c.rhs = j.at("rhs").get<double>();
    c.margin = j.at("margin").get<double>();
    c.tolerance = j.at("tolerance").get<double>();
    c.details = j.value("details", Json::object());
    c.seed = j.at("reproducibility").at("seed").get<std::uint64_t>();
    c.tool_version = j.at("reproducibility").at("tool_version").get<std::string>();
    if (!j.at("witness").is_null()) c.witness = witness_from_json(j.at("witness"));
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed certificate: ") + e.what());
  }
}

namespace {

Reverification verdict(bool ok, double lhs, double margin, std::string message) {
  return Reverification{ok, lhs, margin, std::move(message)};
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol + 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Reverification reverify(const Certificate& c, const EvalOptions& opts) {
  const LinearSystem& sys = c.system;
  const double t = static_cast<double>(sys.t());
  switch (c.kind) {
    case CertificateKind::kNotWeaklyLocallySidorenko:
    case CertificateKind::kNotLocallySidorenko: {
      if (!c.witness || !c.alpha || !c.epsilon) {
        return verdict(false, 0, 0, "missing witness, alpha or epsilon");
      }
      const double alpha = *c.alpha, eps = *c.epsilon;
      const WitnessRef& w = *c.witness;
      if (eps * w.max_abs() > std::min(alpha, 1.0 - alpha) + 1e-12) {
        return verdict(false, 0, 0, "alpha + eps w leaves [0, 1]");
      }
      if (std::abs(w.mean()) > 1e-9) return verdict(false, 0, 0, "witness mean is not zero");
      const Perturbation pert = perturbation(sys, alpha, eps, WitnessEvaluator(w, opts));
      const double lhs = std::pow(alpha, t) + pert.delta;
      const double margin = -pert.delta;
      if (!(margin > pert.tolerance)) {
        return verdict(false, lhs, margin, "margin is not strictly positive");
      }
      if (!close(margin, c.margin, pert.tolerance)) {
        return verdict(false, lhs, margin, "recomputed margin differs from the stored one");
      }
      return verdict(true, lhs, margin, "violation reproduced");
    }
    case CertificateKind::kUncommon: {
      if (!c.witness) return verdict(false, 0, 0, "missing witness");
      const WitnessRef& w = *c.witness;
      if (w.max_abs() > 0.5 + 1e-12) return verdict(false, 0, 0, "1/2 + g leaves [0, 1]");
      const Deficit d = common_deficit(sys, WitnessEvaluator(w, opts));
      const double lhs = std::ldexp(1.0, 1 - static_cast<int>(sys.t())) - d.deficit;
      if (!(d.deficit > c.tolerance)) {
        return verdict(false, lhs, d.deficit, "deficit does not exceed the tolerance");
      }
      if (!close(d.deficit, c.margin, d.tolerance) || !close(lhs, c.lhs, 1e-12)) {
        return verdict(false, lhs, d.deficit, "recomputed deficit differs from the stored one");
      }
      return verdict(true, lhs, d.deficit, "deficit reproduced");
    }
    case CertificateKind::kSearchWitness: {
      if (!c.witness) return verdict(false, 0, 0, "missing witness");
      const WitnessRef& w = *c.witness;
      if (w.max_abs() > 0.5 + 1e-9) return verdict(false, 0, 0, "witness exceeds 1/2");
      if (std::abs(w.mean()) > 1e-9) return verdict(false, 0, 0, "witness mean is not zero");
      const auto v = WitnessEvaluator(w, opts).evaluate(sys);
      const double lhs = v.value.real();
      if (!(lhs < -c.tolerance)) return verdict(false, lhs, -lhs, "T is not negative");
      if (!close(lhs, c.lhs, 1e-9 * v.abs_sum)) {
        return verdict(false, lhs, -lhs, "recomputed T differs from the stored one");
      }
      return verdict(true, lhs, -lhs, "negative value reproduced");
    }
    case CertificateKind::kExampleVerified: {
      const auto name = c.details.value("example", std::string());
      const auto e = example_from_name(name);
      if (!e || !c.n) return verdict(false, 0, 0, "unknown example or missing n");
      ExampleOptions eo;
      eo.analysis.eval = opts;
      eo.alphas = c.details.at("alphas").get<std::vector<double>>();
      if (c.details.contains("epsilon")) eo.epsilon = c.details.at("epsilon").get<double>();
      else eo.epsilon_ratio = c.details.at("epsilon_ratio").get<double>();
      const std::size_t samples = c.details.at("samples").get<std::size_t>();
      try {
        const Certificate again = verify_example(*e, sys.p(), *c.n, samples, c.seed, eo);
        if (!close(again.margin, c.margin, c.tolerance)) {
          return verdict(false, again.lhs, again.margin, "worst-case margin differs");
        }
        return verdict(true, again.lhs, again.margin, "all samples re-verified");
      } catch (const Error& err) {
        return verdict(false, 0, 0, err.what());
      }
    }
  }
  return verdict(false, 0, 0, "unknown certificate kind");
}

}  // namespace sidlab
