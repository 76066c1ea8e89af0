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

#ifndef SQZSUB_STATE_ANALYSIS_H
#define SQZSUB_STATE_ANALYSIS_H

#include <functional>
#include <span>
#include <vector>

#include "sqzsub/parallel.h"
#include "sqzsub/subtraction_engine.h"
#include "sqzsub/target_solver.h"

namespace sqzsub {

double gaussian_wigner(const Mat2 &gamma, const QuadVector &d, const QuadVector &r);

/// sum_j C_j W_G(r; Gamma_j, d_j). Not divided by the success probability.
double eval_mixture_wigner(const MixtureState &m, const QuadVector &r);

/// Analytic Wigner function of S(s) sum_n c_n |n>: the number-state kernels
///   W_{|m><n|}(x, p) = (-1)^n/pi sqrt(n!/m!) (sqrt2 (x - i p))^{m-n} e^{-rho^2} L_n^{(m-n)}(2 rho^2),
/// m >= n, rho^2 = x^2 + p^2, evaluated at the unsqueezed point (x e^{-s}, p e^{s}).
class TargetWigner {
   public:
    explicit TargetWigner(const TargetSpec &target);

    double operator()(double x, double p) const;

   private:
    std::vector<cd> coeffs_;
    double s_;
    std::vector<double> kernel_norm_;  // (-1)^n sqrt(n!/m!) / pi, indexed m*(N+1)+n
};

double target_wigner(const TargetSpec &target, const QuadVector &r);

/// Evaluates one row f(x, p_j) for every p_j in `ps`.
using RowEvaluator = std::function<void(double x, std::span<const double> ps, std::span<double> out)>;

struct SimpsonResult {
    double fine = 0.0;
    /// Same rule on every other node (step doubled).
    double coarse = 0.0;

    /// Richardson estimate of the error of `fine`.
    double error_estimate() const;
};

/// Composite Simpson rule on [x0, x1] x [p0, p1] with `points` nodes per
/// axis (odd, >= 5). Rows are evaluated independently and reduced in row
/// order, so both execution modes return identical bits.
SimpsonResult simpson_2d(const RowEvaluator &f, double x0, double x1, double p0, double p1, int points,
                         Execution execution);

struct QuadratureOptions {
    int points = 1601;
    /// Domain half-width is at least floor_radius + max_j |d_j|.
    double floor_radius = 8.0;
    /// ... and at least |d_j| + sigma_cover * sigma_j for every term.
    double sigma_cover = 6.0;
    double flag_threshold = 1e-5;
    Execution execution = Execution::Parallel;
};

struct FidelityReport {
    double fidelity = 0.0;
    /// Success probability of the mixture that was passed in.
    double probability = 0.0;
    double quadrature_error_estimate = 0.0;
    double domain_radius = 0.0;
    /// quadrature_error_estimate exceeded QuadratureOptions::flag_threshold.
    bool flagged = false;
};

/// Square domain half-width used for a mixture.
double quadrature_radius(const MixtureState &m, const QuadratureOptions &options);

/// F = 2 pi integral of W_m W_target, with W_m normalized by its success
/// probability (so both raw run_sequence output and normalized mixtures are
/// accepted). Throws NumericalError for a zero-probability mixture.
FidelityReport fidelity(const MixtureState &m, const TargetSpec &target, const QuadratureOptions &options = {});

/// 2 pi integral of W_a W_b for two mixtures (each normalized by its weight sum).
double mixture_overlap(const MixtureState &a, const MixtureState &b, const QuadratureOptions &options = {});

struct GridBounds {
    double x_min = -6.0;
    double x_max = 6.0;
    double p_min = -6.0;
    double p_max = 6.0;
};

/// Wigner function sampled on a uniform grid. values[i * p_axis.size() + j] = W(x_i, p_j).
struct WignerGrid {
    GridBounds bounds;
    int resolution = 0;
    std::vector<double> x_axis;
    std::vector<double> p_axis;
    std::vector<double> values;
};

/// `resolution` cells per axis (resolution + 1 nodes), resolution >= 16.
WignerGrid export_wigner_grid(const std::function<double(double, double)> &w, const GridBounds &bounds,
                              int resolution, Execution execution = Execution::Parallel);
/// Samples the mixture divided by its success probability.
WignerGrid export_wigner_grid(const MixtureState &m, const GridBounds &bounds, int resolution,
                              Execution execution = Execution::Parallel);
WignerGrid export_wigner_grid(const TargetSpec &target, const GridBounds &bounds, int resolution,
                              Execution execution = Execution::Parallel);

/// Simpson integral of the grid (trapezoid along an axis with an odd cell count).
double grid_integral(const WignerGrid &g);

struct GridMoments {
    double norm = 0.0;
    QuadVector mean = QuadVector::Zero();
    /// Plain second central moments, normalized by `norm` (vacuum: I/2).
    Mat2 covariance = Mat2::Zero();
};

GridMoments grid_moments(const WignerGrid &g);

}  // namespace sqzsub

#endif
