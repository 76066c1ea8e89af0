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

#ifndef SQZSUB_TARGET_SOLVER_H
#define SQZSUB_TARGET_SOLVER_H

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "sqzsub/subtraction_engine.h"

namespace sqzsub {

using cd = std::complex<double>;

/// The state S(s) sum_n c_n |n>, n = 0..N, with c_N != 0.
struct TargetSpec {
    std::vector<cd> coeffs;
    double s = 0.0;

    int n() const {
        return static_cast<int>(coeffs.size()) - 1;
    }

    /// Normalizes the coefficients. Throws InvalidConfig for an empty or zero
    /// vector, non-finite entries, or a vanishing top coefficient.
    static TargetSpec make(std::vector<cd> coeffs, double s);

    /// Throws InvalidConfig unless normalized to 1e-12 with c_N != 0.
    void validate() const;
};

/// Complete instructions for one run of the experiment, plus the
/// intermediate algebra that produced them.
struct Recipe {
    SetupConfig setup;
    TargetSpec target;
    std::vector<cd> h;
    /// Roots in the order they were fed to the displacement chain.
    std::vector<cd> betas;
    /// Permutation of the canonical root order that produced `betas`.
    std::vector<int> ordering;
    double constraint_residual = 0.0;
};

/// Squeezing left after N attenuating subtractions: atanh(T^N tanh(s_in)).
double reduced_squeezing(double s_in, double T, int n);

/// Inverse of reduced_squeezing. Throws InfeasiblePhysics when
/// tanh(s) >= T^N, naming the largest reachable s.
double required_input_squeezing(double s, double T, int n);

/// <m| (a cosh s + a^dag sinh s)^k |0> for m, k <= n_max, as a column-major
/// (n_max+1)^2 table indexed [m + (n_max+1) k]. Upper triangular.
std::vector<double> ladder_power_table(double s, int n_max);

/// Coefficients h_0..h_N with sum_k h_k A^k |0> = sum_n c_n |n>,
/// A = a cosh s + a^dag sinh s. Throws InvalidConfig for s == 0.
std::vector<cd> compute_h_coeffs(const TargetSpec &target);

/// All N roots of sum_k h_k beta^k, sorted by real part then imaginary part.
/// Companion-matrix eigenvalues followed by a Newton polish; throws
/// NumericalError if any scaled residual stays above 1e-9.
std::vector<cd> solve_betas(std::span<const cd> h);

/// Displacements alpha_1..alpha_{N+1} for roots betas[ordering[0..N-1]]:
/// the chain beta_j = sum_{k>j} alpha_k t^{N+1-k} fixes alpha_2..alpha_{N+1};
/// alpha_1 then removes the residual coherent displacement of the output.
/// Passing an empty ordering uses the identity permutation.
std::vector<cd> solve_alphas(std::span<const cd> betas, double T, double s, std::span<const int> ordering = {});

/// |cosh(s) sum_j alpha_j t^{N+1-j} - sinh(s) sum_j conj(alpha_j) t^{j-N-1}|.
double constraint_residual(std::span<const cd> alphas, double T, double s);

/// Either an explicit input squeezing, or none to derive it from target.s.
struct SqueezingPolicy {
    std::optional<double> s_in;

    static SqueezingPolicy explicit_input(double s_in) {
        return SqueezingPolicy{s_in};
    }
    static SqueezingPolicy from_target() {
        return SqueezingPolicy{};
    }
};

/// With an explicit s_in, the target squeezing is replaced by
/// reduced_squeezing(s_in, T, N), which is what the hardware will produce.
Recipe design_setup(const TargetSpec &target, double T, double eta, SqueezingPolicy policy,
                    std::span<const int> ordering = {});

/// All permutations of 0..n-1 in lexicographic order. Throws InvalidConfig for n > 5.
std::vector<std::vector<int>> enumerate_orderings(int n);

}  // namespace sqzsub

#endif
