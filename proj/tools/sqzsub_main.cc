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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqzsub/errors.h"
#include "sqzsub/experiment.h"
#include "sqzsub/gaussian_core.h"
#include "sqzsub/io.h"

namespace {

using namespace sqzsub;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

constexpr const char *kVersion = "sqzsub 0.1.0";

struct Options {
    std::string target_path;
    std::string recipe_path;
    std::string config_path;
    std::string out_dir;
    std::string ordering = "canonical";
    std::string name;
    double T = 0.95;
    double eta = 0.25;
    std::optional<double> eta_override;
    std::optional<double> s_in_db;
    int oracle_dim = fock::kDefaultDim;
    bool oracle = false;
    bool serial = false;
    int figure_id = 0;
    int resolution = 256;
    std::vector<double> bounds;
};

std::string out_path(const Options &o, const std::string &file) {
    std::filesystem::create_directories(o.out_dir);
    return (std::filesystem::path(o.out_dir) / file).string();
}

void emit(const Json &j, const Options &o, const std::string &file) {
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!o.out_dir.empty()) {
        write_text_file(out_path(o, file), text);
    }
}

Execution execution(const Options &o) {
    return o.serial ? Execution::Serial : Execution::Parallel;
}

OrderingSelection parse_ordering(const std::string &s) {
    if (s == "canonical") {
        return {};
    }
    if (s == "all") {
        return {OrderingSelection::Kind::All, 0};
    }
    try {
        size_t used = 0;
        int idx = std::stoi(s, &used);
        if (used == s.size()) {
            return {OrderingSelection::Kind::Index, idx};
        }
    } catch (const std::exception &) {
    }
    throw InvalidConfig("--ordering takes 'canonical', 'all' or an index, got '" + s + "'");
}

Recipe load_recipe(const Options &o) {
    Recipe r = recipe_from_json(read_json_file(o.recipe_path));
    if (o.eta_override) {
        r.setup.eta = *o.eta_override;
        r.setup.validate();
    }
    return r;
}

int cmd_design(const Options &o) {
    TargetSpec target = target_from_json(read_json_file(o.target_path));
    SqueezingPolicy policy = o.s_in_db ? SqueezingPolicy::explicit_input(squeezing_from_db(*o.s_in_db))
                                       : SqueezingPolicy::from_target();
    if (!o.s_in_db && !(target.s > 0.0) && target.n() > 0) {
        throw InvalidConfig("target has no squeezing; pass --s-in-db or give 's'/'s_dB' in the target");
    }
    OrderingSelection sel = parse_ordering(o.ordering);
    std::vector<int> indices = sel.indices(target.n());
    auto perms = enumerate_orderings(target.n());
    if (indices.size() == 1) {
        Recipe r = design_setup(target, o.T, o.eta, policy, perms[indices[0]]);
        emit(recipe_to_json(r), o, "recipe.json");
        return kExitOk;
    }
    Json all = Json::array();
    for (int k : indices) {
        Recipe r = design_setup(target, o.T, o.eta, policy, perms[k]);
        Json j = recipe_to_json(r);
        all.push_back(j);
        if (!o.out_dir.empty()) {
            write_text_file(out_path(o, "recipe_" + std::to_string(k) + ".json"), j.dump(2) + "\n");
        }
    }
    std::cout << all.dump(2) << "\n";
    return kExitOk;
}

int cmd_simulate(const Options &o) {
    Recipe r = load_recipe(o);
    QuadratureOptions q;
    q.execution = execution(o);
    FidelityReport rep = simulate_recipe(r, q);
    Json j;
    j["engine"] = report_to_json(rep);
    int code = rep.flagged ? kExitNumerical : kExitOk;
    if (o.oracle) {
        OracleComparison c = compare_with_oracle(r, rep, fock::OracleOptions{.dim = o.oracle_dim});
        j["oracle"] = oracle_to_json(c);
        if (!c.agrees()) {
            code = kExitNumerical;
        }
    }
    emit(j, o, "report.json");
    return code;
}

int cmd_oracle_check(const Options &o) {
    Recipe r = load_recipe(o);
    FidelityReport rep = simulate_recipe(r);
    OracleComparison c = compare_with_oracle(r, rep, fock::OracleOptions{.dim = o.oracle_dim});
    Json j;
    j["engine"] = report_to_json(rep);
    j["oracle"] = oracle_to_json(c);
    emit(j, o, "oracle_check.json");
    if (!c.agrees()) {
        std::cerr << "oracle disagreement: dF = " << c.delta_fidelity << ", dP = " << c.delta_probability << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

Json sweep_meta(const SweepSpec &spec, const std::string &source, const std::string &csv) {
    Json m;
    m["generator"] = kVersion;
    m["config_hash"] = hash_hex(source);
    m["csv_hash"] = hash_hex(csv);
    m["sweep"] = sweep_to_json(spec);
    return m;
}

int count_errors(const std::vector<SweepRow> &rows) {
    int n = 0;
    for (const auto &r : rows) {
        n += !r.error.empty();
    }
    return n;
}

int cmd_sweep(const Options &o) {
    Json cfg = read_json_file(o.config_path);
    SweepSpec spec = sweep_from_json(cfg);
    std::vector<SweepRow> rows = run_sweep(spec, execution(o));
    std::string csv = format_sweep_csv(rows);
    if (o.out_dir.empty()) {
        std::cout << csv;
    } else {
        write_text_file(out_path(o, spec.name + ".csv"), csv);
        write_text_file(out_path(o, spec.name + ".meta.json"), sweep_meta(spec, cfg.dump(), csv).dump(2) + "\n");
        std::cout << "wrote " << rows.size() << " rows to " << out_path(o, spec.name + ".csv") << "\n";
    }
    int errors = count_errors(rows);
    if (errors > 0) {
        std::cerr << errors << " sweep point(s) failed; see the error column\n";
    }
    return kExitOk;
}

int cmd_optimize(const Options &o) {
    TargetSpec target = target_from_json(read_json_file(o.target_path));
    OptimizeOptions opts;
    opts.search_quadrature.execution = execution(o);
    opts.final_quadrature.execution = execution(o);
    OrderingSelection sel = parse_ordering(o.ordering);
    if (sel.kind == OrderingSelection::Kind::All) {
        throw InvalidConfig("optimize takes a single ordering");
    }
    opts.ordering = enumerate_orderings(target.n())[sel.indices(target.n())[0]];
    OptimizeResult res = optimize_squeezing(target, o.T, o.eta, opts);
    emit(optimize_to_json(res), o, "optimum.json");
    if (res.flag != OptimizeFlag::None) {
        std::cerr << "warning: optimum not interior (" << optimize_flag_name(res.flag)
                  << "); reporting the best point found\n";
    }
    return res.report.flagged ? kExitNumerical : kExitOk;
}

int cmd_figure(const Options &o) {
    FigureConfig fig = figure_config(o.figure_id);
    std::string dir = o.out_dir.empty() ? "." : o.out_dir;
    Options local = o;
    local.out_dir = dir;
    Json meta;
    meta["generator"] = kVersion;
    meta["figure"] = fig.id;
    meta["config_version"] = fig.config_version;
    meta["config_hash"] = hash_hex(fig.source);
    meta["description"] = fig.description;
    meta["note"] = fig.note;
    Json files = Json::array();
    int errors = 0;
    for (const auto &spec : fig.sweeps) {
        std::vector<SweepRow> rows = run_sweep(spec, execution(o));
        std::string csv = format_sweep_csv(rows);
        std::string file = "fig" + std::to_string(fig.id) + "_" + spec.name + ".csv";
        write_text_file(out_path(local, file), csv);
        files.push_back({{"file", file}, {"rows", rows.size()}, {"csv_hash", hash_hex(csv)},
                         {"sweep", sweep_to_json(spec)}});
        errors += count_errors(rows);
        std::cout << "wrote " << out_path(local, file) << "\n";
    }
    meta["files"] = files;
    write_text_file(out_path(local, "fig" + std::to_string(fig.id) + ".meta.json"), meta.dump(2) + "\n");
    if (errors > 0) {
        std::cerr << errors << " figure point(s) failed; see the error column\n";
    }
    return kExitOk;
}

int cmd_wigner(const Options &o) {
    if (o.recipe_path.empty() == o.target_path.empty()) {
        throw InvalidConfig("wigner takes exactly one of --recipe or --target");
    }
    GridBounds b;
    if (!o.bounds.empty()) {
        if (o.bounds.size() != 4 || !(o.bounds[0] < o.bounds[1]) || !(o.bounds[2] < o.bounds[3])) {
            throw InvalidConfig("--bounds takes x_min x_max p_min p_max with min < max");
        }
        b = {o.bounds[0], o.bounds[1], o.bounds[2], o.bounds[3]};
    }
    WignerGrid g;
    Json meta;
    meta["generator"] = kVersion;
    if (!o.recipe_path.empty()) {
        Recipe r = load_recipe(o);
        MixtureState m = run_sequence(r.setup, EngineOptions{.execution = execution(o)});
        g = export_wigner_grid(m, b, o.resolution, execution(o));
        meta["source"] = "recipe";
        meta["recipe"] = recipe_to_json(r);
        meta["probability"] = success_probability(m);
    } else {
        TargetSpec t = target_from_json(read_json_file(o.target_path));
        g = export_wigner_grid(t, b, o.resolution, execution(o));
        meta["source"] = "target";
        meta["target"] = target_to_json(t);
    }
    std::string csv = "x,p,w\n";
    for (size_t i = 0; i < g.x_axis.size(); i++) {
        for (size_t j = 0; j < g.p_axis.size(); j++) {
            csv += format_double(g.x_axis[i]) + "," + format_double(g.p_axis[j]) + "," +
                   format_double(g.values[i * g.p_axis.size() + j]) + "\n";
        }
    }
    meta["bounds"] = {b.x_min, b.x_max, b.p_min, b.p_max};
    meta["resolution"] = g.resolution;
    meta["integral"] = grid_integral(g);
    meta["csv_hash"] = hash_hex(csv);
    std::string name = o.name.empty() ? "wigner" : o.name;
    if (o.out_dir.empty()) {
        std::cout << csv;
    } else {
        write_text_file(out_path(o, name + ".csv"), csv);
        write_text_file(out_path(o, name + ".meta.json"), meta.dump(2) + "\n");
        std::cout << "wrote " << out_path(o, name + ".csv") << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Squeezed-superposition synthesis by displacements and photon subtractions"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto add_T = [&](CLI::App *c) { c->add_option("--T", o.T, "subtraction beam splitter transmittance")->capture_default_str(); };
    auto add_eta = [&](CLI::App *c) { c->add_option("--eta", o.eta, "detector efficiency")->capture_default_str(); };
    auto add_out = [&](CLI::App *c) { c->add_option("--out", o.out_dir, "output directory"); };
    auto add_serial = [&](CLI::App *c) { c->add_flag("--serial", o.serial, "use the serial reference kernels"); };

    auto *design = app.add_subcommand("design", "design displacements for a target state");
    design->add_option("--target", o.target_path, "target JSON")->required();
    add_T(design);
    add_eta(design);
    design->add_option("--s-in-db", o.s_in_db, "input squeezing in dB (default: derived from the target)");
    design->add_option("--ordering", o.ordering, "canonical, all, or a permutation index");
    add_out(design);

    auto *simulate = app.add_subcommand("simulate", "run the Gaussian-mixture engine on a recipe");
    simulate->add_option("--recipe", o.recipe_path, "recipe JSON")->required();
    simulate->add_option("--eta", o.eta_override, "override the recipe's detector efficiency");
    simulate->add_flag("--oracle", o.oracle, "cross-check with the Fock-basis oracle");
    simulate->add_option("--oracle-dim", o.oracle_dim, "oracle truncation dimension")->capture_default_str();
    add_serial(simulate);
    add_out(simulate);

    auto *sweep = app.add_subcommand("sweep", "sweep s_in_dB, T or eta");
    sweep->add_option("--config", o.config_path, "sweep JSON")->required();
    add_serial(sweep);
    add_out(sweep);

    auto *optimize = app.add_subcommand("optimize", "maximize fidelity over the input squeezing");
    optimize->add_option("--target", o.target_path, "target JSON")->required();
    add_T(optimize);
    add_eta(optimize);
    optimize->add_option("--ordering", o.ordering, "canonical or a permutation index");
    add_serial(optimize);
    add_out(optimize);

    auto *figure = app.add_subcommand("figure", "regenerate a figure's curve bundle");
    figure->add_option("--id,id", o.figure_id, "figure id (2, 3, 4, 6, 7, 8, 9)")->required();
    add_serial(figure);
    add_out(figure);

    auto *oracle = app.add_subcommand("oracle-check", "compare engine and Fock-basis oracle for a recipe");
    oracle->add_option("--recipe", o.recipe_path, "recipe JSON")->required();
    oracle->add_option("--eta", o.eta_override, "override the recipe's detector efficiency");
    oracle->add_option("--oracle-dim", o.oracle_dim, "oracle truncation dimension")->capture_default_str();
    add_out(oracle);

    auto *wigner = app.add_subcommand("wigner", "export a Wigner function grid as x,p,w CSV");
    wigner->add_option("--recipe", o.recipe_path, "recipe JSON (engine output)");
    wigner->add_option("--target", o.target_path, "target JSON (analytic)");
    wigner->add_option("--bounds", o.bounds, "x_min x_max p_min p_max")->expected(4);
    wigner->add_option("--resolution", o.resolution, "cells per axis")->capture_default_str();
    wigner->add_option("--name", o.name, "output file stem");
    add_serial(wigner);
    add_out(wigner);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*design) {
            return cmd_design(o);
        }
        if (*simulate) {
            return cmd_simulate(o);
        }
        if (*sweep) {
            return cmd_sweep(o);
        }
        if (*optimize) {
            return cmd_optimize(o);
        }
        if (*figure) {
            return cmd_figure(o);
        }
        if (*oracle) {
            return cmd_oracle_check(o);
        }
        if (*wigner) {
            return cmd_wigner(o);
        }
    } catch (const InvalidConfig &e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const InfeasiblePhysics &e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
