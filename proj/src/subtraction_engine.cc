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

#include "sqzsub/subtraction_engine.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include <Eigen/LU>
#include <omp.h>

#include "sqzsub/errors.h"

namespace sqzsub {

int available_threads() {
    return omp_get_max_threads();
}

void SetupConfig::validate() const {
    std::ostringstream ss;
    if (!std::isfinite(s_in)) {
        ss << "input squeezing must be finite";
    } else if (!(T > 0.0 && T < 1.0)) {
        ss << "transmittance T must lie in (0, 1), got " << T;
    } else if (!(eta >= 0.0 && eta <= 1.0)) {
        ss << "detector efficiency eta must lie in [0, 1], got " << eta;
    } else if (alphas.empty()) {
        ss << "setup needs at least one displacement";
    } else {
        for (const auto &a : alphas) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                ss << "displacements must be finite";
                break;
            }
        }
    }
    if (!ss.str().empty()) {
        throw InvalidConfig(ss.str());
    }
}

MixtureState initial_state(double s_in, std::complex<double> alpha_1) {
    GaussianTerm term;
    term.weight = 1.0;
    term.gamma = Mat2::Zero();
    term.gamma(0, 0) = std::exp(-2.0 * s_in);
    term.gamma(1, 1) = std::exp(2.0 * s_in);
    term.d = displacement_vector(alpha_1);
    return MixtureState{{term}, 0};
}

std::pair<GaussianTerm, GaussianTerm> click_update(const GaussianTerm &term, double T, double eta,
                                                   const QuadVector &z_next) {
    TwoModeGaussian ab = lossy_bs_map(inverse2(term.gamma), term.d, T, eta);
    BlockDecomposition blk = block_decompose(ab);
    const Mat2 &ups_a = blk.upsilon_a;
    const Mat2 &sigma = blk.sigma;
    const Mat2 &ups_b = blk.upsilon_b;
    QuadVector v_a = ab.d_ab.head<2>();
    QuadVector v_b = ab.d_ab.tail<2>();

    // Tracing out the ancilla: Schur complement of the B block.
    GaussianTerm traced;
    traced.gamma = ups_a - sigma * inverse2(ups_b) * sigma.transpose();
    traced.gamma = 0.5 * (traced.gamma + traced.gamma.transpose()).eval();
    traced.d = v_a + z_next;
    traced.weight = term.weight;

    // Projecting the ancilla on vacuum, with weight -2 from the click POVM
    // Wigner function 1/(2 pi) - exp(-x^2 - p^2)/pi.
    Mat2 ups_b_tilde = ups_b + Mat2::Identity();
    Mat2 ups_b_tilde_inv = inverse2(ups_b_tilde);
    GaussianTerm projected;
    projected.gamma = ups_a - sigma * ups_b_tilde_inv * sigma.transpose();
    projected.gamma = 0.5 * (projected.gamma + projected.gamma.transpose()).eval();
    Mat2 gamma_proj_inv = inverse2(projected.gamma);
    projected.d = v_a + gamma_proj_inv * sigma * ups_b_tilde_inv * v_b + z_next;

    Mat2 m = ups_b * ups_b_tilde_inv -
             ups_b_tilde_inv * sigma.transpose() * gamma_proj_inv * sigma * ups_b_tilde_inv;
    double ratio = blk.det_gamma_inverse / (projected.gamma.determinant() * ups_b_tilde.determinant());
    projected.weight = -2.0 * term.weight * std::sqrt(ratio) * std::exp(-v_b.dot(m * v_b));

    return {traced, projected};
}

namespace {

void prune(std::vector<GaussianTerm> &terms, double threshold) {
    double max_abs = 0.0;
    for (const auto &t : terms) {
        max_abs = std::max(max_abs, std::abs(t.weight));
    }
    std::erase_if(terms, [&](const GaussianTerm &t) { return std::abs(t.weight) < threshold * max_abs; });
}

}  // namespace

MixtureState run_sequence(const SetupConfig &cfg, const EngineOptions &options) {
    cfg.validate();
    MixtureState state = initial_state(cfg.s_in, cfg.alphas[0]);

    for (int k = 1; k <= cfg.subtractions(); k++) {
        QuadVector z_next = displacement_vector(cfg.alphas[k]);
        const auto &parents = state.terms;
        std::vector<GaussianTerm> children(2 * parents.size());
        auto n = static_cast<std::ptrdiff_t>(parents.size());

        if (options.execution == Execution::Parallel && n > 1) {
            std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t j = 0; j < n; j++) {
                try {
                    auto [c1, c2] = click_update(parents[j], cfg.T, cfg.eta, z_next);
                    children[2 * j] = c1;
                    children[2 * j + 1] = c2;
                } catch (...) {
#pragma omp critical
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
            if (failure) {
                std::rethrow_exception(failure);
            }
        } else {
            for (std::ptrdiff_t j = 0; j < n; j++) {
                auto [c1, c2] = click_update(parents[j], cfg.T, cfg.eta, z_next);
                children[2 * j] = c1;
                children[2 * j + 1] = c2;
            }
        }

        if (options.prune_threshold > 0.0) {
            prune(children, options.prune_threshold);
        }
        state.terms = std::move(children);
        state.n_subtractions = k;
    }
    return state;
}

double success_probability(const MixtureState &m) {
    double p = 0.0;
    for (const auto &t : m.terms) {
        p += t.weight;
    }
    return p;
}

MixtureState normalize(const MixtureState &m) {
    double p = success_probability(m);
    if (!(p > 1e-300)) {
        std::ostringstream ss;
        ss << "cannot normalize a mixture with success probability " << p;
        throw NumericalError(ss.str());
    }
    MixtureState out = m;
    for (auto &t : out.terms) {
        t.weight /= p;
    }
    return out;
}

}  // namespace sqzsub
