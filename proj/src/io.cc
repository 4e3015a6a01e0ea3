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

#include "sidlab/io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "sidlab/error.h"

namespace sidlab {
namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kInvalidInput, what);
}

template <class T>
T field_as(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad(std::string("field '") + key + "' has the wrong type");
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double d) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char b[8] = {};
  if (!in.read(reinterpret_cast<char*>(b), bytes)) bad("truncated binary grid file");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  if (path == "-") {
    std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    return parse_json(text);
  }
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write " + path);
  out << text;
}

LinearSystem system_from_json(const Json& j) {
  const auto p = field_as<std::int64_t>(j, "p");
  std::optional<std::string> name;
  if (j.contains("name") && !j.at("name").is_null()) name = field_as<std::string>(j, "name");
  const auto rows = field_as<std::vector<std::vector<std::int64_t>>>(j, "equations");
  if (rows.empty()) {
    const auto t = field_as<std::size_t>(j, "t");
    if (t == 0) bad("full-space system needs t > 0");
    return LinearSystem::full_space(PrimeField(p), t).with_name(name);
  }
  if (j.contains("t") && field_as<std::size_t>(j, "t") != rows.front().size()) {
    bad("field 't' disagrees with the equation length");
  }
  return LinearSystem::create(p, rows, name);
}

Json system_to_json(const LinearSystem& sys) {
  Json j;
  if (sys.name()) j["name"] = *sys.name();
  j["p"] = sys.p();
  j["t"] = sys.t();
  Json rows = Json::array();
  for (const auto& r : sys.matrix()) rows.push_back(r);
  j["equations"] = rows;
  return j;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  bad("expected a number or a [re, im] pair");
}

GridFunction function_from_json(const Json& j) {
  const auto p = field_as<std::int64_t>(j, "p");
  const auto n = field_as<std::size_t>(j, "n");
  if (j.contains("indicator")) {
    const auto members = field_as<std::vector<std::uint64_t>>(j, "indicator");
    return GridFunction::indicator(p, n, members);
  }
  if (!j.contains("values") || !j.at("values").is_array()) bad("missing field 'values'");
  std::vector<Complex> v;
  v.reserve(j.at("values").size());
  for (const Json& e : j.at("values")) v.push_back(complex_from_json(e));
  return GridFunction(p, n, std::move(v));
}

Json function_to_json(const GridFunction& f) {
  Json j;
  j["p"] = f.p();
  j["n"] = f.n();
  if (f.exact_hint() == ExactHint::kIndicator) {
    Json members = Json::array();
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      if (f[x].real() == 1.0) members.push_back(x);
    }
    j["indicator"] = members;
    return j;
  }
  Json values = Json::array();
  for (const Complex& z : f.values()) values.push_back(complex_to_json(z));
  j["values"] = values;
  return j;
}

void write_grid_binary(std::ostream& out, const GridFunction& f) {
  put_u32(out, static_cast<std::uint32_t>(f.p()));
  put_u32(out, static_cast<std::uint32_t>(f.n()));
  for (const Complex& z : f.values()) {
    put_f64(out, z.real());
    put_f64(out, z.imag());
  }
}

GridFunction read_grid_binary(std::istream& in) {
  const auto p = static_cast<std::int64_t>(get_le(in, 4));
  const auto n = static_cast<std::size_t>(get_le(in, 4));
  const GridIndex grid(p, n);
  std::vector<Complex> v(grid.size());
  for (Complex& z : v) {
    const double re = std::bit_cast<double>(get_le(in, 8));
    const double im = std::bit_cast<double>(get_le(in, 8));
    z = {re, im};
  }
  if (in.peek() != std::char_traits<char>::eof()) bad("trailing bytes in binary grid file");
  return GridFunction(p, n, std::move(v));
}

GridFunction read_function_file(const std::string& path) {
  const bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
  if (!binary) return function_from_json(read_json_file(path));
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open " + path);
  return read_grid_binary(in);
}

Json report_to_json(const ClassificationReport& r, const std::optional<std::string>& name) {
  Json j;
  if (name) j["system"] = *name;
  j["p"] = r.p;
  j["t"] = r.t;
  j["codimension"] = r.codimension;
  j["linearly_generic"] = r.linearly_generic;
  j["s_value"] = r.s_value;
  j["complexity"] = r.complexity ? Json(*r.complexity) : Json(nullptr);
  j["complexity_s_max"] = r.complexity_s_max;
  Json tuples = Json::array();
  for (const auto& a : r.additive_tuples) {
    Json idx = Json::array();
    for (std::size_t i : a.selector.indices()) idx.push_back(i + 1);
    tuples.push_back(Json{{"forms", idx}, {"length", a.length}});
  }
  j["additive_tuples"] = tuples;
  j["predicted_status"] = std::string(status_name(r.predicted_status));
  j["justification"] = r.justification;
  return j;
}

}  // namespace sidlab
