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

#ifndef SQZSUB_FOCK_ORACLE_H
#define SQZSUB_FOCK_ORACLE_H

#include <complex>
#include <span>

#include <Eigen/Core>

#include "sqzsub/gaussian_core.h"
#include "sqzsub/subtraction_engine.h"
#include "sqzsub/target_solver.h"

// Brute-force simulation of the same experiment in a truncated number basis.
// Nothing here shares code with the Gaussian-mixture engine; it exists to
// check it.

namespace sqzsub::fock {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Number of top levels whose population counts as truncation tail.
inline constexpr int kTailWidth = 5;
inline constexpr int kDefaultDim = 40;
inline constexpr double kDefaultTailTolerance = 1e-12;

struct ModeOperators {
    CMatrix a;
    CMatrix adag;
    CMatrix n;
};

/// a(m, m+1) = sqrt(m+1), a^dag = a^T, n = diag(0..dim-1).
ModeOperators build_mode_operators(int dim);

/// Scaling-and-squaring Taylor exponential of a dense matrix.
CMatrix expm(const CMatrix &m);

struct FockVector {
    CVector amplitudes;

    int dim() const {
        return static_cast<int>(amplitudes.size());
    }
    /// Population of the top kTailWidth levels.
    double tail_mass() const;
    static FockVector basis(int dim, int n);
};

struct FockDensityMatrix {
    CMatrix rho;
    bool normalized = false;

    int dim() const {
        return static_cast<int>(rho.rows());
    }
    double trace() const;
    double tail_mass() const;
    static FockDensityMatrix pure(const FockVector &v);
};

/// exp(s (a^dag^2 - a^2)/2) applied to the state. The exponential is taken
/// in a padded basis and the result truncated back; throws NumericalError if
/// the population pushed into the top kTailWidth levels (or beyond) exceeds
/// tail_tolerance.
FockVector apply_squeeze(const FockVector &state, double s, double tail_tolerance = kDefaultTailTolerance);
FockVector apply_displace(const FockVector &state, std::complex<double> alpha,
                          double tail_tolerance = kDefaultTailTolerance);
FockDensityMatrix apply_squeeze(const FockDensityMatrix &state, double s,
                                double tail_tolerance = kDefaultTailTolerance);
FockDensityMatrix apply_displace(const FockDensityMatrix &state, std::complex<double> alpha,
                                 double tail_tolerance = kDefaultTailTolerance);

/// Amplitudes <n-k|_A <k|_B U_BS |n>_A |0>_B for k = 0..n, where U_BS is the
/// two-mode beam splitter with cos(theta) = sqrt(T). Column n of the returned
/// (dim x dim) matrix holds the block for n input photons.
CMatrix beam_splitter_blocks(int dim, double T);

/// Mixes the mode with a vacuum ancilla on the beam splitter, measures the
/// ancilla with a click detector of efficiency eta, Pi_1 = I - sum_k (1-eta)^k |k><k|,
/// and traces it out. The trace of the result is the click probability.
FockDensityMatrix subtract_photon_click(const FockDensityMatrix &rho, double T, double eta);

/// Same coupling, but the ancilla is projected onto exactly `photons` photons.
FockDensityMatrix subtract_photons_resolved(const FockDensityMatrix &rho, double T, int photons);

/// Joint state of (A, ancilla) after the beam splitter: amp(m, k) = <m|_A <k|_B psi>.
CMatrix split_on_beam_splitter(const FockVector &state, double T);

/// Means and covariance (vacuum = identity) of a two-mode pure state in
/// (x_A, p_A, x_B, p_B) order.
TwoModeGaussian two_mode_moments(const CMatrix &amp);

/// Means and covariance (vacuum = identity) of a normalized single-mode state.
std::pair<QuadVector, CovarianceMatrix2> single_mode_moments(const FockDensityMatrix &rho);

/// (1/pi) Tr[rho D(alpha) Parity D(alpha)^dag] with alpha = (x + i p)/sqrt(2).
double parity_wigner(const FockDensityMatrix &rho, const QuadVector &r);

/// S(s) sum_n c_n |n>, normalized.
FockVector target_vector(const TargetSpec &target, int dim, double tail_tolerance = kDefaultTailTolerance);

/// Normalized S(s) prod_j (a cosh s + a^dag sinh s - beta_j) |0>.
FockVector pure_state_predict(std::span<const std::complex<double>> betas, double s, int dim,
                              double tail_tolerance = kDefaultTailTolerance);

struct OracleOptions {
    int dim = kDefaultDim;
    double tail_tolerance = kDefaultTailTolerance;
};

struct OracleResult {
    double probability = 0.0;
    double fidelity = 0.0;
    /// Largest truncation tail seen along the pipeline.
    double max_tail = 0.0;
    /// Unnormalized: trace equals `probability`.
    FockDensityMatrix rho_out;
};

OracleResult oracle_simulate(const SetupConfig &cfg, const TargetSpec &target, const OracleOptions &options = {});

}  // namespace sqzsub::fock

#endif
