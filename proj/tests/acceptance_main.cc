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

// Acceptance harness. One PASS/FAIL line per criterion; exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "sqzsub/errors.h"
#include "sqzsub/experiment.h"
#include "sqzsub/fock_oracle.h"
#include "sqzsub/gaussian_core.h"

using namespace sqzsub;

namespace {

struct Named {
    const char *label;
    std::vector<cd> c;
    double reference_db;
};

// N = 1 block first, then N = 2.
const std::vector<Named> &named_states() {
    static const std::vector<Named> v = {
        {"S|1>", {0.0, 1.0}, 0.50},
        {"S(|0>+|1>)", {1.0, 1.0}, 1.66},
        {"S(3|0>+|1>)", {3.0, 1.0}, 0.85},
        {"S(|0>+3|1>)", {1.0, 3.0}, 0.36},
        {"S|2>", {0.0, 0.0, 1.0}, 3.54},
        {"S(|1>+|2>)", {0.0, 1.0, 1.0}, 4.02},
        {"S(|0>+|2>)", {1.0, 0.0, 1.0}, 2.43},
        {"S(|0>+|1>+|2>)", {1.0, 1.0, 1.0}, 3.24},
    };
    return v;
}

TargetSpec named_target(int i) {
    return TargetSpec::make(named_states()[i].c, 0.0);
}

Recipe at_db(const TargetSpec &t, double T, double eta, double db, std::span<const int> ordering = {}) {
    return design_setup(t, T, eta, SqueezingPolicy::explicit_input(squeezing_from_db(db)), ordering);
}

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Optimizer runs shared by several criteria, keyed by (state, T).
std::map<std::pair<int, double>, OptimizeResult> &optimum_cache() {
    static std::map<std::pair<int, double>, OptimizeResult> m;
    return m;
}

const OptimizeResult &optimum(int i, double T, double eta = 0.25) {
    auto key = std::make_pair(i, T);
    auto &cache = optimum_cache();
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, optimize_squeezing(named_target(i), T, eta)).first;
    }
    return it->second;
}

double slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0.0;
    double my = 0.0;
    for (size_t i = 0; i < x.size(); i++) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (size_t i = 0; i < x.size(); i++) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

std::vector<double> log_space(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; i++) {
        v[i] = std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (n - 1));
    }
    return v;
}

std::vector<cd> random_coeffs(std::mt19937_64 &rng, int n) {
    std::normal_distribution<double> g;
    std::vector<cd> c(n + 1);
    for (auto &z : c) {
        z = {g(rng), g(rng)};
    }
    return c;
}

// Mixtures collected by criterion 1 for the representation checks.
std::vector<std::pair<MixtureState, int>> &collected_mixtures() {
    static std::vector<std::pair<MixtureState, int>> v;
    return v;
}

Outcome criterion1() {
    std::mt19937_64 rng(20260101);
    std::uniform_int_distribution<int> pick_n(1, 2);
    std::uniform_real_distribution<double> pick_T(0.9, 0.99);
    std::uniform_real_distribution<double> pick_eta(0.05, 1.0);
    std::uniform_real_distribution<double> pick_db(0.1, 5.0);
    int accepted = 0;
    int rejected = 0;
    int bad = 0;
    double worst_dp = 0.0;
    double worst_df = 0.0;
    while (accepted < 50 && rejected < 1000) {
        int n = pick_n(rng);
        TargetSpec t = TargetSpec::make(random_coeffs(rng, n), 0.0);
        double T = pick_T(rng);
        double eta = pick_eta(rng);
        double db = pick_db(rng);
        Recipe r;
        OracleComparison c;
        FidelityReport rep;
        try {
            r = at_db(t, T, eta, db);
            rep = simulate_recipe(r);
            c = compare_with_oracle(r, rep, fock::OracleOptions{.dim = 40});
        } catch (const NumericalError &) {
            // Truncation tail above tolerance at dim 40: not a valid test point.
            rejected++;
            continue;
        }
        accepted++;
        collected_mixtures().emplace_back(run_sequence(r.setup), n);
        worst_dp = std::max(worst_dp, std::abs(c.delta_probability));
        worst_df = std::max(worst_df, std::abs(c.delta_fidelity));
        if (!(std::abs(c.delta_probability) <= 1e-7 && std::abs(c.delta_fidelity) <= 1e-5) || rep.flagged) {
            bad++;
        }
    }
    bool pass = accepted == 50 && bad == 0;
    return {pass, fmt("%d configs, %d over tolerance, max|dP|=%.2e (tol 1e-7), max|dF|=%.2e (tol 1e-5), "
                      "%d draws rejected by the dim-40 tail check",
                      accepted, bad, worst_dp, worst_df, rejected)};
}

Outcome criterion2() {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> pick_s(0.1, 0.5);
    double worst = 1.0;
    for (int trial = 0; trial < 30; trial++) {
        int n = 1 + trial % 4;
        TargetSpec t = TargetSpec::make(random_coeffs(rng, n), pick_s(rng));
        std::vector<cd> b = solve_betas(compute_h_coeffs(t));
        fock::FockVector pred = fock::pure_state_predict(b, t.s, 60);
        fock::FockVector ref = fock::target_vector(t, 60);
        worst = std::min(worst, std::abs(ref.amplitudes.dot(pred.amplitudes)));
    }
    return {worst >= 1.0 - 1e-9, fmt("30 targets N=1..4, min overlap 1-%.2e (need >= 1-1e-9)", 1.0 - worst)};
}

Outcome criterion3() {
    bool pass = true;
    std::string detail;
    for (int i = 0; i < 4; i++) {
        const OptimizeResult &o = optimum(i, 0.95);
        FidelityReport rep = o.report;
        double db = o.s_in_db();
        std::string note;
        if (o.flag != OptimizeFlag::None) {
            db = named_states()[i].reference_db;
            rep = simulate_recipe(at_db(named_target(i), 0.95, 0.25, db));
            note = std::string(" [optimizer ") + optimize_flag_name(o.flag) + ", used fallback]";
        }
        bool ok = rep.fidelity >= 0.95 && rep.probability >= 1e-5 && rep.probability <= 1e-2;
        pass = pass && ok;
        detail += fmt("%s%s F=%.4f P=%.2e @%.2fdB%s", detail.empty() ? "" : "; ", named_states()[i].label,
                      rep.fidelity, rep.probability, db, note.c_str());
    }
    return {pass, detail + " (need F>=0.95, P in [1e-5,1e-2])"};
}

Outcome criterion4() {
    bool pass = true;
    std::string detail;
    for (int i = 1; i < 8; i++) {
        const OptimizeResult &o = optimum(i, 0.95);
        double want = named_states()[i].reference_db;
        bool ok = o.flag == OptimizeFlag::None && std::abs(o.s_in_db() - want) <= 0.3;
        pass = pass && ok;
        detail += fmt("%s%s %.2f vs %.2f dB%s", detail.empty() ? "" : "; ", named_states()[i].label, o.s_in_db(),
                      want, ok ? "" : " MISS");
    }
    return {pass, detail + " (tol 0.3 dB)"};
}

Outcome criterion5() {
    bool pass = true;
    double worst = 0.0;
    std::string detail;
    for (int i = 0; i < 8; i++) {
        TargetSpec t = named_target(i);
        int n = t.n();
        double db = named_states()[i].reference_db;
        std::vector<double> lx, ly, ex, ey;
        for (double omt : log_space(0.005, 0.05, 10)) {
            lx.push_back(std::log(omt));
            ly.push_back(std::log(success_probability(run_sequence(at_db(t, 1.0 - omt, 0.25, db).setup))));
        }
        for (double eta : log_space(0.01, 0.25, 10)) {
            ex.push_back(std::log(eta));
            ey.push_back(std::log(success_probability(run_sequence(at_db(t, 0.95, eta, db).setup))));
        }
        double kt = slope(lx, ly);
        double ke = slope(ex, ey);
        double dev = std::max(std::abs(kt - n), std::abs(ke - n)) / n;
        worst = std::max(worst, dev);
        pass = pass && dev <= 0.10;
        if (i == 1 || i == 7) {
            detail += fmt("%s%s slope_T=%.3f slope_eta=%.3f", detail.empty() ? "" : "; ", named_states()[i].label, kt,
                          ke);
        }
    }
    return {pass, fmt("8 states, worst relative slope deviation %.3f (tol 0.10); ", worst) + detail};
}

Outcome criterion6() {
    bool pass = true;
    double worst = 0.0;
    int count = 0;
    std::string spreads;
    for (int id : {4, 8}) {
        for (SweepSpec s : figure_config(id).sweeps) {
            s.min = 0.05;
            s.max = 1.0;
            s.steps = 20;
            std::vector<SweepRow> rows = run_sweep(s);
            double lo = 1.0;
            double hi = 0.0;
            for (const auto &r : rows) {
                if (!r.error.empty()) {
                    pass = false;
                    continue;
                }
                lo = std::min(lo, r.fidelity);
                hi = std::max(hi, r.fidelity);
            }
            worst = std::max(worst, hi - lo);
            pass = pass && hi - lo <= 0.01;
            spreads += fmt(" fig%d/%s %.3f", id, s.name.c_str(), hi - lo);
            count++;
        }
    }
    return {pass, fmt("%d eta sweeps over [0.05, 1], worst max-min F = %.2e (tol 0.01);", count, worst) + spreads};
}

Outcome criterion7() {
    bool pass = true;
    double worst = 1.0;
    const char *worst_label = "";
    for (int i = 0; i < 8; i++) {
        FidelityReport rep = simulate_recipe(at_db(named_target(i), 0.9999, 1.0, named_states()[i].reference_db));
        if (rep.fidelity < worst) {
            worst = rep.fidelity;
            worst_label = named_states()[i].label;
        }
        pass = pass && rep.fidelity >= 0.999 && !rep.flagged;
    }
    return {pass, fmt("8 targets at T=0.9999 eta=1, min F=%.6f (%s), need >= 0.999", worst, worst_label)};
}

struct OrderingPair {
    double f0, f1, p0, p1;
};

OrderingPair both_orderings(int i, double T) {
    TargetSpec t = named_target(i);
    std::vector<std::vector<int>> ords = enumerate_orderings(2);
    FidelityReport a = simulate_recipe(at_db(t, T, 0.25, named_states()[i].reference_db, ords[0]));
    FidelityReport b = simulate_recipe(at_db(t, T, 0.25, named_states()[i].reference_db, ords[1]));
    return {a.fidelity, b.fidelity, a.probability, b.probability};
}

Outcome criterion8() {
    bool pass = true;
    std::string detail;
    // The two-ordering states with distinct, non-mirrored roots.
    for (int i : {5, 7}) {
        OrderingPair ideal = both_orderings(i, 0.9999);
        OrderingPair real = both_orderings(i, 0.90);
        double d_ideal = std::abs(ideal.f0 - ideal.f1);
        double d_real = std::abs(real.f0 - real.f1);
        double ratio = real.p0 / real.p1;
        bool ok = d_ideal < 1e-3 && d_real > 1e-3 && ratio >= 0.5 && ratio <= 2.0;
        pass = pass && ok;
        detail += fmt("%s%s dF(0.9999)=%.1e dF(0.90)=%.2e Pratio=%.3f%s", detail.empty() ? "" : "; ",
                      named_states()[i].label, d_ideal, d_real, ratio, ok ? "" : " MISS");
    }
    // Mirror-symmetric roots give identical fidelities; reported only.
    OrderingPair n2 = both_orderings(4, 0.90);
    OrderingPair z2 = both_orderings(6, 0.90);
    detail += fmt("; info S|2> dF(0.90)=%.1e, S(|0>+|2>) dF(0.90)=%.1e", std::abs(n2.f0 - n2.f1),
                  std::abs(z2.f0 - z2.f1));
    return {pass, detail + " (need <1e-3, >1e-3, ratio in [0.5,2])"};
}

Outcome criterion9() {
    double f_hard = optimum(4, 0.95).report.fidelity;
    bool pass = true;
    std::string detail = fmt("S|2> F=%.4f vs", f_hard);
    for (int i = 5; i < 8; i++) {
        double f = optimum(i, 0.95).report.fidelity;
        pass = pass && f_hard < f;
        detail += fmt(" %s %.4f", named_states()[i].label, f);
    }
    const OptimizeResult &low_t = optimum(7, 0.90);
    pass = pass && low_t.report.fidelity >= 0.90;
    detail += fmt("; S(|0>+|1>+|2>) at T=0.90 F=%.4f @%.2fdB (need >= 0.90)", low_t.report.fidelity,
                  low_t.s_in_db());
    return {pass, detail};
}

Outcome criterion10() {
    std::vector<std::pair<MixtureState, int>> all = collected_mixtures();
    for (int i = 0; i < 8; i++) {
        Recipe r = at_db(named_target(i), 0.95, 0.25, named_states()[i].reference_db);
        all.emplace_back(run_sequence(r.setup), named_target(i).n());
    }
    bool pass = true;
    double worst_int = 0.0;
    int bad_terms = 0;
    int bad_weight = 0;
    for (const auto &[m, n] : all) {
        if (static_cast<int>(m.terms.size()) != (1 << n)) {
            bad_terms++;
        }
        double p = success_probability(m);
        if (!(p > 0.0 && p <= 1.0)) {
            bad_weight++;
        }
        double rad = quadrature_radius(m, QuadratureOptions{});
        WignerGrid g = export_wigner_grid(m, GridBounds{-rad, rad, -rad, rad}, 800);
        worst_int = std::max(worst_int, std::abs(grid_integral(g) - 1.0));
    }
    pass = bad_terms == 0 && bad_weight == 0 && worst_int <= 1e-6;
    return {pass, fmt("%zu mixtures, max|integral-1|=%.2e (tol 1e-6), %d wrong term counts, %d sums outside (0,1]",
                      all.size(), worst_int, bad_terms, bad_weight)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"engine-oracle equivalence", criterion1},
        {"solver universality", criterion2},
        {"N=1 targets at T=0.95 eta=0.25", criterion3},
        {"optimal squeezing vs reference values", criterion4},
        {"probability scaling laws", criterion5},
        {"eta robustness", criterion6},
        {"ideal-limit convergence", criterion7},
        {"two-ordering behavior", criterion8},
        {"hardness ordering", criterion9},
        {"normalization and representation", criterion10},
    };
    int failures = 0;
    for (size_t k = 0; k < criteria.size(); k++) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
