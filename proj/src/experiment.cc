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

#include "sqzsub/experiment.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "sqzsub/errors.h"
#include "sqzsub/gaussian_core.h"
#include "sqzsub/io.h"

namespace sqzsub {

FidelityReport simulate_recipe(const Recipe &recipe, const QuadratureOptions &quadrature) {
    MixtureState m = run_sequence(recipe.setup, EngineOptions{.execution = quadrature.execution});
    return fidelity(m, recipe.target, quadrature);
}

bool OracleComparison::agrees() const {
    return std::abs(delta_fidelity) < 1e-5 && std::abs(delta_probability) < 1e-7;
}

OracleComparison compare_with_oracle(const Recipe &recipe, const FidelityReport &engine,
                                     const fock::OracleOptions &options) {
    fock::OracleResult o = fock::oracle_simulate(recipe.setup, recipe.target, options);
    OracleComparison c;
    c.dim = options.dim;
    c.probability = o.probability;
    c.fidelity = o.fidelity;
    c.max_tail = o.max_tail;
    c.delta_probability = engine.probability - o.probability;
    c.delta_fidelity = engine.fidelity - o.fidelity;
    return c;
}

const char *swept_name(SweptParameter p) {
    switch (p) {
        case SweptParameter::SInDb:
            return "s_in_dB";
        case SweptParameter::T:
            return "T";
        case SweptParameter::Eta:
            return "eta";
    }
    return "?";
}

std::vector<int> OrderingSelection::indices(int n) const {
    int count = static_cast<int>(enumerate_orderings(n).size());
    switch (kind) {
        case Kind::Canonical:
            return {0};
        case Kind::All: {
            std::vector<int> all(count);
            for (int i = 0; i < count; i++) {
                all[i] = i;
            }
            return all;
        }
        case Kind::Index:
            if (index < 0 || index >= count) {
                std::ostringstream ss;
                ss << "ordering index " << index << " out of range for N = " << n << " (" << count
                   << " orderings)";
                throw InvalidConfig(ss.str());
            }
            return {index};
    }
    return {0};
}

void SweepSpec::validate() const {
    target.validate();
    auto fail = [](const std::string &msg) { throw InvalidConfig(msg); };
    if (steps < 2) {
        fail("sweep needs at least 2 steps");
    }
    if (!std::isfinite(min) || !std::isfinite(max) || !(min <= max)) {
        fail("sweep range must be finite with min <= max");
    }
    switch (swept) {
        case SweptParameter::SInDb:
            if (min < 0.0) {
                fail("s_in_dB sweep must stay non-negative");
            }
            break;
        case SweptParameter::T:
            if (!(min > 0.0 && max < 1.0)) {
                fail("T sweep must stay inside (0, 1)");
            }
            break;
        case SweptParameter::Eta:
            if (!(min >= 0.0 && max <= 1.0)) {
                fail("eta sweep must stay inside [0, 1]");
            }
            break;
    }
    if (swept != SweptParameter::T && !(T > 0.0 && T < 1.0)) {
        fail("fixed T must lie in (0, 1)");
    }
    if (swept != SweptParameter::Eta && !(eta >= 0.0 && eta <= 1.0)) {
        fail("fixed eta must lie in [0, 1]");
    }
    if (swept != SweptParameter::SInDb && !s_in_db && !(target.s > 0.0)) {
        fail("sweep needs either a fixed s_in_dB or a target squeezing");
    }
    orderings.indices(target.n());
}

double SweepSpec::value(int i) const {
    if (i == steps - 1) {
        return max;
    }
    return min + (max - min) * i / (steps - 1);
}

Recipe sweep_point_recipe(const SweepSpec &spec, double value, int ordering_index) {
    double T = spec.T;
    double eta = spec.eta;
    std::optional<double> s_in_db = spec.s_in_db;
    switch (spec.swept) {
        case SweptParameter::SInDb:
            s_in_db = value;
            break;
        case SweptParameter::T:
            T = value;
            break;
        case SweptParameter::Eta:
            eta = value;
            break;
    }
    SqueezingPolicy policy = s_in_db ? SqueezingPolicy::explicit_input(squeezing_from_db(*s_in_db))
                                     : SqueezingPolicy::from_target();
    std::vector<int> ordering;
    if (spec.target.n() > 0) {
        ordering = enumerate_orderings(spec.target.n())[ordering_index];
    }
    return design_setup(spec.target, T, eta, policy, ordering);
}

namespace {

std::string describe_failure(std::exception_ptr e) {
    try {
        std::rethrow_exception(e);
    } catch (const InvalidConfig &ex) {
        return std::string("invalid config: ") + ex.what();
    } catch (const InfeasiblePhysics &ex) {
        return std::string("infeasible: ") + ex.what();
    } catch (const NumericalError &ex) {
        return std::string("numerical: ") + ex.what();
    } catch (const std::exception &ex) {
        return std::string("error: ") + ex.what();
    }
}

SweepRow evaluate_point(const SweepSpec &spec, double value, int ordering_index, const QuadratureOptions &q) {
    SweepRow row;
    row.swept_value = value;
    row.T = spec.swept == SweptParameter::T ? value : spec.T;
    row.eta = spec.swept == SweptParameter::Eta ? value : spec.eta;
    row.n = spec.target.n();
    row.ordering_index = ordering_index;
    row.fidelity = std::nan("");
    row.probability = std::nan("");
    row.quadrature_error = std::nan("");
    row.s_in_db = spec.swept == SweptParameter::SInDb ? value : spec.s_in_db.value_or(std::nan(""));
    row.s_target = std::nan("");
    try {
        Recipe r = sweep_point_recipe(spec, value, ordering_index);
        row.s_in_db = squeezing_to_db(r.setup.s_in);
        row.s_target = r.target.s;
        FidelityReport rep = simulate_recipe(r, q);
        row.fidelity = rep.fidelity;
        row.probability = rep.probability;
        row.quadrature_error = rep.quadrature_error_estimate;
        if (rep.flagged) {
            row.error = "numerical: quadrature error estimate above threshold";
        }
    } catch (...) {
        row.error = describe_failure(std::current_exception());
    }
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec &spec, Execution execution, const QuadratureOptions &quadrature) {
    spec.validate();
    std::vector<int> orderings = spec.orderings.indices(spec.target.n());
    auto n_ord = static_cast<std::ptrdiff_t>(orderings.size());
    auto total = static_cast<std::ptrdiff_t>(spec.steps) * n_ord;
    std::vector<SweepRow> rows(total);

    QuadratureOptions inner = quadrature;
    if (execution == Execution::Parallel) {
        inner.execution = Execution::Serial;
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t k = 0; k < total; k++) {
            rows[k] = evaluate_point(spec, spec.value(static_cast<int>(k / n_ord)), orderings[k % n_ord], inner);
        }
    } else {
        for (std::ptrdiff_t k = 0; k < total; k++) {
            rows[k] = evaluate_point(spec, spec.value(static_cast<int>(k / n_ord)), orderings[k % n_ord], inner);
        }
    }
    return rows;
}

std::string sweep_csv_header() {
    return "swept_value,fidelity,probability,s_in_dB,s_target,T,eta,N,ordering_index,quadrature_error,error";
}

std::string format_sweep_row(const SweepRow &row) {
    std::string err = row.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    std::ostringstream ss;
    ss << format_double(row.swept_value) << ',' << format_double(row.fidelity) << ','
       << format_double(row.probability) << ',' << format_double(row.s_in_db) << ','
       << format_double(row.s_target) << ',' << format_double(row.T) << ',' << format_double(row.eta) << ','
       << row.n << ',' << row.ordering_index << ',' << format_double(row.quadrature_error) << ',';
    if (!err.empty()) {
        ss << '"' << err << '"';
    }
    return ss.str();
}

std::string format_sweep_csv(const std::vector<SweepRow> &rows) {
    std::string out = sweep_csv_header() + "\n";
    for (const auto &r : rows) {
        out += format_sweep_row(r);
        out += '\n';
    }
    return out;
}

const char *optimize_flag_name(OptimizeFlag f) {
    switch (f) {
        case OptimizeFlag::None:
            return "none";
        case OptimizeFlag::LowerBoundary:
            return "lower_boundary";
        case OptimizeFlag::UpperBoundary:
            return "upper_boundary";
        case OptimizeFlag::Flat:
            return "flat";
    }
    return "?";
}

double OptimizeResult::s_in_db() const {
    return squeezing_to_db(s_in);
}

OptimizeResult optimize_squeezing(const TargetSpec &target, double T, double eta, const OptimizeOptions &options) {
    target.validate();
    if (target.n() < 1) {
        throw InvalidConfig("squeezing optimization needs at least one subtraction");
    }
    if (!(options.s_min_db > 0.0 && options.s_min_db < options.s_max_db) || options.scan_points < 3) {
        throw InvalidConfig("optimizer range must satisfy 0 < s_min_db < s_max_db with >= 3 scan points");
    }
    double lo = squeezing_from_db(options.s_min_db);
    double hi = squeezing_from_db(options.s_max_db);

    int evaluations = 0;
    auto objective = [&](double s_in) {
        evaluations++;
        Recipe r = design_setup(target, T, eta, SqueezingPolicy::explicit_input(s_in), options.ordering);
        return simulate_recipe(r, options.search_quadrature).fidelity;
    };

    int n = options.scan_points;
    std::vector<double> xs(n), fs(n);
    for (int i = 0; i < n; i++) {
        xs[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
        fs[i] = objective(xs[i]);
    }
    int best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
    double spread = *std::max_element(fs.begin(), fs.end()) - *std::min_element(fs.begin(), fs.end());

    OptimizeResult result;
    double s_best = xs[best];
    if (spread < options.flat_threshold) {
        result.flag = OptimizeFlag::Flat;
    } else if (best == 0) {
        result.flag = OptimizeFlag::LowerBoundary;
    } else if (best == n - 1) {
        result.flag = OptimizeFlag::UpperBoundary;
    } else {
        // Golden-section maximization on the bracketing scan cell pair.
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = xs[best - 1];
        double b = xs[best + 1];
        double c = b - invphi * (b - a);
        double d = a + invphi * (b - a);
        double fc = objective(c);
        double fd = objective(d);
        while (b - a > options.tolerance) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = objective(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = objective(d);
            }
        }
        s_best = fc > fd ? c : d;
        if (std::max(fc, fd) < fs[best]) {
            s_best = xs[best];
        }
    }

    result.s_in = s_best;
    result.recipe = design_setup(target, T, eta, SqueezingPolicy::explicit_input(s_best), options.ordering);
    result.report = simulate_recipe(result.recipe, options.final_quadrature);
    result.evaluations = evaluations + 1;
    return result;
}

}  // namespace sqzsub
