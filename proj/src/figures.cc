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

#include <string>
#include <vector>

#include "sqzsub/errors.h"
#include "sqzsub/experiment.h"
#include "sqzsub/io.h"

namespace sqzsub {

namespace {
#include "figure_configs.inc"
}  // namespace

const std::vector<int> &known_figures() {
    static const std::vector<int> ids = [] {
        std::vector<int> out;
        for (const auto &f : kEmbeddedFigures) {
            out.push_back(f.id);
        }
        return out;
    }();
    return ids;
}

FigureConfig figure_config(int id) {
    for (const auto &f : kEmbeddedFigures) {
        if (f.id == id) {
            std::string text = f.text;
            FigureConfig cfg = figure_from_json(parse_json_text(text, "figure " + std::to_string(id)), text);
            if (cfg.id != id) {
                throw InvalidConfig("embedded figure config " + std::to_string(id) + " declares id " +
                                    std::to_string(cfg.id));
            }
            return cfg;
        }
    }
    throw InvalidConfig("unknown figure id " + std::to_string(id) + " (known: 2, 3, 4, 6, 7, 8, 9)");
}

}  // namespace sqzsub
