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

#ifndef SQZSUB_EXPERIMENT_H
#define SQZSUB_EXPERIMENT_H

#include <optional>
#include <string>
#include <vector>

#include "sqzsub/fock_oracle.h"
#include "sqzsub/state_analysis.h"
#include "sqzsub/target_solver.h"

namespace sqzsub {

/// Runs the Gaussian-mixture engine for a recipe and scores it against the
/// recipe's own target.
FidelityReport simulate_recipe(const Recipe &recipe, const QuadratureOptions &quadrature = {});

struct OracleComparison {
    int dim = 0;
    double probability = 0.0;
    double fidelity = 0.0;
    double max_tail = 0.0;
    /// engine minus oracle
    double delta_probability = 0.0;
    double delta_fidelity = 0.0;

    /// |dF| < 1e-5 and |dP| < 1e-7.
    bool agrees() const;
};

OracleComparison compare_with_oracle(const Recipe &recipe, const FidelityReport &engine,
                                     const fock::OracleOptions &options = {});

enum class SweptParameter { SInDb, T, Eta };

const char *swept_name(SweptParameter p);

struct OrderingSelection {
    enum class Kind { Canonical, All, Index };
    Kind kind = Kind::Canonical;
    int index = 0;

    /// Indices into enumerate_orderings(n).
    std::vector<int> indices(int n) const;
};

struct SweepSpec {
    std::string name;
    TargetSpec target;
    SweptParameter swept = SweptParameter::SInDb;
    double min = 0.0;
    double max = 0.0;
    int steps = 2;
    /// Fixed input squeezing. When absent, s_in follows from target.s.
    std::optional<double> s_in_db;
    double T = 0.95;
    double eta = 0.25;
    OrderingSelection orderings;

    void validate() const;
    double value(int i) const;
};

struct SweepRow {
    double swept_value = 0.0;
    double fidelity = 0.0;
    double probability = 0.0;
    double s_in_db = 0.0;
    double s_target = 0.0;
    double T = 0.0;
    double eta = 0.0;
    int n = 0;
    int ordering_index = 0;
    double quadrature_error = 0.0;
    /// Empty on success.
    std::string error;
};

/// Builds the recipe for one sweep point.
Recipe sweep_point_recipe(const SweepSpec &spec, double value, int ordering_index);

/// One row per grid point per ordering, grid-major. Points run in parallel
/// under Execution::Parallel; row order never depends on scheduling.
std::vector<SweepRow> run_sweep(const SweepSpec &spec, Execution execution = Execution::Parallel,
                                const QuadratureOptions &quadrature = {});

std::string sweep_csv_header();
std::string format_sweep_row(const SweepRow &row);
std::string format_sweep_csv(const std::vector<SweepRow> &rows);

enum class OptimizeFlag { None, LowerBoundary, UpperBoundary, Flat };

const char *optimize_flag_name(OptimizeFlag f);

struct OptimizeOptions {
    double s_min_db = 0.01;
    double s_max_db = 8.0;
    int scan_points = 33;
    /// In natural units of s_in.
    double tolerance = 1e-4;
    /// Scan spread below this counts as a flat objective.
    double flat_threshold = 1e-6;
    /// Used during the search.
    QuadratureOptions search_quadrature{.points = 801};
    /// Used for the reported optimum.
    QuadratureOptions final_quadrature{};
    std::vector<int> ordering;
};

struct OptimizeResult {
    double s_in = 0.0;
    FidelityReport report;
    OptimizeFlag flag = OptimizeFlag::None;
    int evaluations = 0;
    Recipe recipe;

    double s_in_db() const;
};

/// Coarse scan over [s_min_db, s_max_db] followed by golden-section
/// refinement of the best bracket. A maximum on the scan boundary or a flat
/// scan is reported through `flag` with the best point found.
OptimizeResult optimize_squeezing(const TargetSpec &target, double T, double eta,
                                  const OptimizeOptions &options = {});

struct FigureConfig {
    int id = 0;
    int config_version = 0;
    std::string description;
    std::string note;
    std::vector<SweepSpec> sweeps;
    /// Exact config text, hashed into output metadata.
    std::string source;
};

const std::vector<int> &known_figures();

/// Throws InvalidConfig for an unknown id.
FigureConfig figure_config(int id);

}  // namespace sqzsub

#endif
