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

#include "sqzsub/io.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sqzsub/errors.h"
#include "sqzsub/gaussian_core.h"

namespace sqzsub {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::string_view bytes) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(bytes));
    return buf;
}

Json parse_json_text(std::string_view text, const std::string &origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw InvalidConfig(origin + ": " + e.what());
    }
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfig("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidConfig("cannot write " + path);
    }
    out << text;
}

namespace {

template <typename F>
auto guarded(const std::string &what, F &&f) {
    try {
        return f();
    } catch (const Json::exception &e) {
        throw InvalidConfig(what + ": " + e.what());
    }
}

double number(const Json &j, const char *key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw InvalidConfig(std::string("missing or non-numeric key '") + key + "'");
    }
    return j.at(key).get<double>();
}

std::vector<cd> complex_list(const Json &j, const char *key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw InvalidConfig(std::string("missing array '") + key + "'");
    }
    std::vector<cd> out;
    for (const auto &e : j.at(key)) {
        out.push_back(complex_from_json(e));
    }
    return out;
}

Json complex_list_to_json(const std::vector<cd> &v) {
    Json a = Json::array();
    for (cd z : v) {
        a.push_back(complex_to_json(z));
    }
    return a;
}

}  // namespace

cd complex_from_json(const Json &j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw InvalidConfig("complex numbers are written as [re, im], got " + j.dump());
}

Json complex_to_json(cd z) {
    return Json::array({z.real(), z.imag()});
}

TargetSpec target_from_json(const Json &j) {
    return guarded("target", [&] {
        if (!j.is_object()) {
            throw InvalidConfig("target must be a JSON object");
        }
        bool has_db = j.contains("s_dB");
        bool has_nat = j.contains("s");
        if (has_db && has_nat) {
            throw InvalidConfig("target gives both 's' and 's_dB'; name one unit");
        }
        double s = 0.0;
        if (has_db) {
            s = squeezing_from_db(number(j, "s_dB"));
        } else if (has_nat) {
            s = number(j, "s");
        }
        return TargetSpec::make(complex_list(j, "c"), s);
    });
}

Json target_to_json(const TargetSpec &t) {
    Json j;
    j["c"] = complex_list_to_json(t.coeffs);
    j["s"] = t.s;
    return j;
}

Json recipe_to_json(const Recipe &r) {
    Json j;
    j["format"] = "sqzsub-recipe";
    j["version"] = 1;
    j["target"] = target_to_json(r.target);
    Json setup;
    setup["s_in"] = r.setup.s_in;
    setup["s_in_dB"] = squeezing_to_db(r.setup.s_in);
    setup["T"] = r.setup.T;
    setup["eta"] = r.setup.eta;
    setup["N"] = r.setup.subtractions();
    setup["alphas"] = complex_list_to_json(r.setup.alphas);
    j["setup"] = setup;
    j["h"] = complex_list_to_json(r.h);
    j["betas"] = complex_list_to_json(r.betas);
    j["ordering"] = r.ordering;
    j["constraint_residual"] = r.constraint_residual;
    return j;
}

Recipe recipe_from_json(const Json &j) {
    return guarded("recipe", [&] {
        if (!j.is_object() || !j.contains("setup") || !j.contains("target")) {
            throw InvalidConfig("recipe needs 'setup' and 'target' objects");
        }
        Recipe r;
        r.target = target_from_json(j.at("target"));
        const Json &s = j.at("setup");
        r.setup.s_in = s.contains("s_in") ? number(s, "s_in") : squeezing_from_db(number(s, "s_in_dB"));
        r.setup.T = number(s, "T");
        r.setup.eta = number(s, "eta");
        r.setup.alphas = complex_list(s, "alphas");
        r.setup.validate();
        if (r.setup.subtractions() != r.target.n()) {
            throw InvalidConfig("recipe has " + std::to_string(r.setup.subtractions()) +
                                " subtractions but the target has N = " + std::to_string(r.target.n()));
        }
        if (j.contains("h")) {
            r.h = complex_list(j, "h");
        }
        if (j.contains("betas")) {
            r.betas = complex_list(j, "betas");
        }
        if (j.contains("ordering")) {
            r.ordering = j.at("ordering").get<std::vector<int>>();
        }
        r.constraint_residual = constraint_residual(r.setup.alphas, r.setup.T, r.target.s);
        return r;
    });
}

namespace {

SweptParameter swept_from_string(const std::string &s) {
    if (s == "s_in_dB") {
        return SweptParameter::SInDb;
    }
    if (s == "T") {
        return SweptParameter::T;
    }
    if (s == "eta") {
        return SweptParameter::Eta;
    }
    throw InvalidConfig("unknown swept parameter '" + s + "' (use s_in_dB, T or eta)");
}

OrderingSelection ordering_from_json(const Json &j) {
    OrderingSelection o;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "canonical") {
            o.kind = OrderingSelection::Kind::Canonical;
        } else if (s == "all") {
            o.kind = OrderingSelection::Kind::All;
        } else {
            throw InvalidConfig("orderings must be 'canonical', 'all' or an index");
        }
    } else if (j.is_number_integer()) {
        o.kind = OrderingSelection::Kind::Index;
        o.index = j.get<int>();
    } else {
        throw InvalidConfig("orderings must be 'canonical', 'all' or an index");
    }
    return o;
}

Json ordering_to_json(const OrderingSelection &o) {
    switch (o.kind) {
        case OrderingSelection::Kind::Canonical:
            return "canonical";
        case OrderingSelection::Kind::All:
            return "all";
        case OrderingSelection::Kind::Index:
            return o.index;
    }
    return "canonical";
}

}  // namespace

SweepSpec sweep_from_json(const Json &j) {
    return guarded("sweep", [&] {
        SweepSpec s;
        s.name = j.value("name", std::string("sweep"));
        s.target = target_from_json(j.at("target"));
        s.swept = swept_from_string(j.at("swept").get<std::string>());
        const Json &r = j.at("range");
        s.min = number(r, "min");
        s.max = number(r, "max");
        s.steps = r.at("steps").get<int>();
        if (j.contains("fixed")) {
            const Json &f = j.at("fixed");
            if (f.contains("T")) {
                s.T = number(f, "T");
            }
            if (f.contains("eta")) {
                s.eta = number(f, "eta");
            }
            if (f.contains("s_in_dB") && f.contains("s_in")) {
                throw InvalidConfig("fixed block gives both 's_in' and 's_in_dB'; name one unit");
            }
            if (f.contains("s_in_dB")) {
                s.s_in_db = number(f, "s_in_dB");
            } else if (f.contains("s_in")) {
                s.s_in_db = squeezing_to_db(number(f, "s_in"));
            }
        }
        if (j.contains("orderings")) {
            s.orderings = ordering_from_json(j.at("orderings"));
        }
        s.validate();
        return s;
    });
}

Json sweep_to_json(const SweepSpec &s) {
    Json j;
    j["name"] = s.name;
    j["target"] = target_to_json(s.target);
    j["swept"] = swept_name(s.swept);
    j["range"] = {{"min", s.min}, {"max", s.max}, {"steps", s.steps}};
    Json f;
    f["T"] = s.T;
    f["eta"] = s.eta;
    if (s.s_in_db) {
        f["s_in_dB"] = *s.s_in_db;
    }
    j["fixed"] = f;
    j["orderings"] = ordering_to_json(s.orderings);
    return j;
}

FigureConfig figure_from_json(const Json &j, std::string source) {
    return guarded("figure config", [&] {
        FigureConfig f;
        f.id = j.at("figure").get<int>();
        f.config_version = j.at("config_version").get<int>();
        f.description = j.value("description", std::string());
        f.note = j.value("note", std::string());
        for (const auto &s : j.at("sweeps")) {
            f.sweeps.push_back(sweep_from_json(s));
        }
        f.source = std::move(source);
        return f;
    });
}

Json report_to_json(const FidelityReport &r) {
    Json j;
    j["fidelity"] = r.fidelity;
    j["probability"] = r.probability;
    j["quadrature_error"] = r.quadrature_error_estimate;
    j["domain_radius"] = r.domain_radius;
    j["flagged"] = r.flagged;
    return j;
}

Json oracle_to_json(const OracleComparison &c) {
    Json j;
    j["dim"] = c.dim;
    j["fidelity"] = c.fidelity;
    j["probability"] = c.probability;
    j["max_tail"] = c.max_tail;
    j["delta_fidelity"] = c.delta_fidelity;
    j["delta_probability"] = c.delta_probability;
    j["agrees"] = c.agrees();
    return j;
}

Json optimize_to_json(const OptimizeResult &r) {
    Json j;
    j["s_in"] = r.s_in;
    j["s_in_dB"] = r.s_in_db();
    j["fidelity"] = r.report.fidelity;
    j["probability"] = r.report.probability;
    j["quadrature_error"] = r.report.quadrature_error_estimate;
    j["flag"] = optimize_flag_name(r.flag);
    j["evaluations"] = r.evaluations;
    j["recipe"] = recipe_to_json(r.recipe);
    return j;
}

}  // namespace sqzsub
