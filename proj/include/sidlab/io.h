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

#ifndef SIDLAB_IO_H_
#define SIDLAB_IO_H_

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "sidlab/grid.h"
#include "sidlab/linear_system.h"

namespace sidlab {

using Json = nlohmann::ordered_json;

// "-" reads standard input. Parse failures raise InvalidInput.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);
// Two-space indentation with a trailing newline.
std::string dump_json(const Json& j);
void write_text_file(const std::string& path, const std::string& text);

// {"name": optional, "p": prime, "equations": [[...], ...]}; an empty
// equation list needs "t" and yields the full space.
LinearSystem system_from_json(const Json& j);
Json system_to_json(const LinearSystem& sys);

// {"p", "n", "values": [[re, im], ...]} or {"p", "n", "indicator": [index...]},
// or real values as plain numbers.
GridFunction function_from_json(const Json& j);
Json function_to_json(const GridFunction& f);

// Little-endian: uint32 p, uint32 n, then p^n (re, im) float64 pairs.
void write_grid_binary(std::ostream& out, const GridFunction& f);
GridFunction read_grid_binary(std::istream& in);
GridFunction read_function_file(const std::string& path);

Json report_to_json(const ClassificationReport& r,
                    const std::optional<std::string>& name = std::nullopt);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

}  // namespace sidlab

#endif  // SIDLAB_IO_H_
