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

#ifndef SIDLAB_CERTIFICATE_H_
#define SIDLAB_CERTIFICATE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "sidlab/constructions.h"
#include "sidlab/functional.h"
#include "sidlab/io.h"
#include "sidlab/linear_system.h"

namespace sidlab {

inline constexpr int kCertificateSchemaVersion = 1;
inline constexpr const char* kToolVersion = "sidlab 1.0.0";

// w = scale * (base (x) 1_0), with 1_0 the point mass on F_p^k. The base is
// either a dense grid function or a factored tensor product.
class WitnessRef {
 public:
  static WitnessRef dense(GridFunction f);
  static WitnessRef factored(TensorWitness tw);

  WitnessRef scaled(double s) const;
  WitnessRef localised(std::size_t extra) const;

  std::int64_t p() const;
  std::size_t n() const;  // including the localising coordinates
  double scale() const noexcept { return scale_; }
  std::size_t localise_k() const noexcept { return k_; }
  bool is_factored() const noexcept { return base_.index() == 1; }
  const GridFunction& dense_base() const { return std::get<0>(base_); }
  const TensorWitness& tensor_base() const { return std::get<1>(base_); }

  // The base factors (one for a dense base); w = scale * sign * (x) factors.
  std::vector<const GridFunction*> factors() const;
  double sign() const;

  double max_abs() const;
  Complex mean() const;
  GridFunction materialize() const;

 private:
  explicit WitnessRef(std::variant<GridFunction, TensorWitness> base)
      : base_(std::move(base)) {}

  std::variant<GridFunction, TensorWitness> base_;
  double scale_ = 1.0;
  std::size_t k_ = 0;
};

Json witness_to_json(const WitnessRef& w);
WitnessRef witness_from_json(const Json& j);

enum class CertificateKind {
  kNotWeaklyLocallySidorenko,
  kNotLocallySidorenko,
  kUncommon,
  kExampleVerified,
  kSearchWitness,
};

std::string_view certificate_kind_name(CertificateKind k);
CertificateKind certificate_kind_from_name(std::string_view name);

struct Certificate {
  Certificate(CertificateKind k, LinearSystem sys) : kind(k), system(std::move(sys)) {}

  CertificateKind kind;
  LinearSystem system;
  std::optional<WitnessRef> witness;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  double lhs = 0.0;
  double rhs = 0.0;
  // rhs - lhs for violations, lhs - rhs (worst sample) for verified examples.
  double margin = 0.0;
  // Rounding scale against which strictness of the margin is judged.
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  Json details = Json::object();
};

Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

struct Reverification {
  bool ok = false;
  double recomputed_lhs = 0.0;
  double recomputed_margin = 0.0;
  std::string message;
};

// Recomputes the certificate from its stored system, witness and parameters.
Reverification reverify(const Certificate& c, const EvalOptions& opts = {});

}  // namespace sidlab

#endif  // SIDLAB_CERTIFICATE_H_
