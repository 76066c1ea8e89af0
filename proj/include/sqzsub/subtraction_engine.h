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

#ifndef SQZSUB_SUBTRACTION_ENGINE_H
#define SQZSUB_SUBTRACTION_ENGINE_H

#include <complex>
#include <utility>
#include <vector>

#include "sqzsub/gaussian_core.h"
#include "sqzsub/parallel.h"

namespace sqzsub {

/// One weighted Gaussian C * sqrt(det Gamma)/pi * exp(-(r-d)^T Gamma (r-d)).
/// The weight may be negative.
struct GaussianTerm {
    double weight = 1.0;
    Mat2 gamma = Mat2::Identity();
    QuadVector d = QuadVector::Zero();
};

/// Wigner function of the principal mode times the success probability so
/// far: W_k(r) P_k = sum_j C_j W_G(r; Gamma_j, d_j). Terms are ordered so
/// that the children of parent j sit at 2j and 2j+1 (0-based): first the
/// trace-over-ancilla child, then the vacuum-projection child.
struct MixtureState {
    std::vector<GaussianTerm> terms;
    int n_subtractions = 0;
};

/// The experiment: squeezed vacuum s_in, displacement alphas[0], then
/// N = alphas.size() - 1 rounds of (click-conditioned subtraction on a beam
/// splitter of transmittance T with detector efficiency eta, displacement
/// alphas[k]).
struct SetupConfig {
    double s_in = 0.0;
    double T = 0.95;
    double eta = 1.0;
    std::vector<std::complex<double>> alphas{0.0};

    int subtractions() const {
        return static_cast<int>(alphas.size()) - 1;
    }
    /// Throws InvalidConfig.
    void validate() const;
};

struct EngineOptions {
    Execution execution = Execution::Parallel;
    /// Drop terms with |C| < prune_threshold * max|C| after each click. Off
    /// when zero. Pruned mixtures no longer hold 2^k terms.
    double prune_threshold = 0.0;
};

MixtureState initial_state(double s_in, std::complex<double> alpha_1);

/// Conditions one Gaussian term on a detector click and applies the next
/// displacement. Returns (trace-over-ancilla child, vacuum-projection child);
/// the weights of the pair sum to C times the click probability of the term.
std::pair<GaussianTerm, GaussianTerm> click_update(const GaussianTerm &term, double T, double eta,
                                                   const QuadVector &z_next);

MixtureState run_sequence(const SetupConfig &cfg, const EngineOptions &options = {});

/// Sum of term weights. For a run_sequence output this is the probability
/// that all detectors clicked.
double success_probability(const MixtureState &m);

/// Divides every weight by success_probability(m). Throws NumericalError
/// when the probability is not above 1e-300.
MixtureState normalize(const MixtureState &m);

}  // namespace sqzsub

#endif
