// Copyright 2026 The sqzsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQZSUB_IO_H
#define SQZSUB_IO_H

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sqzsub/experiment.h"

namespace sqzsub {

using Json = nlohmann::ordered_json;

/// %.17g
std::string format_double(double v);

uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::string_view bytes);

/// Throws InvalidConfig if the file is missing or not valid JSON.
Json read_json_file(const std::string &path);
Json parse_json_text(std::string_view text, const std::string &origin);
void write_text_file(const std::string &path, const std::string &text);

/// [re, im] or a bare real number.
cd complex_from_json(const Json &j);
Json complex_to_json(cd z);

/// {"c": [...], "s_dB": x} or {"c": [...], "s": x}. A file with neither
/// squeezing key gets s = 0. Coefficients are normalized on load.
TargetSpec target_from_json(const Json &j);
Json target_to_json(const TargetSpec &t);

Recipe recipe_from_json(const Json &j);
Json recipe_to_json(const Recipe &r);

SweepSpec sweep_from_json(const Json &j);
Json sweep_to_json(const SweepSpec &s);

FigureConfig figure_from_json(const Json &j, std::string source);

Json report_to_json(const FidelityReport &r);
Json oracle_to_json(const OracleComparison &c);
Json optimize_to_json(const OptimizeResult &r);

}  // namespace sqzsub

#endif
