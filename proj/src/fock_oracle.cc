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

#include "sqzsub/fock_oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sqzsub/errors.h"

namespace sqzsub::fock {

using cd = std::complex<double>;

ModeOperators build_mode_operators(int dim) {
    if (dim < 2) {
        throw InvalidConfig("Fock truncation dimension must be at least 2");
    }
    ModeOperators ops;
    ops.a = CMatrix::Zero(dim, dim);
    ops.n = CMatrix::Zero(dim, dim);
    for (int m = 0; m + 1 < dim; m++) {
        ops.a(m, m + 1) = std::sqrt(static_cast<double>(m + 1));
    }
    for (int m = 0; m < dim; m++) {
        ops.n(m, m) = static_cast<double>(m);
    }
    ops.adag = ops.a.transpose();
    return ops;
}

CMatrix expm(const CMatrix &m) {
    double norm = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.25) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    }
    CMatrix a = m / std::ldexp(1.0, squarings);
    CMatrix result = CMatrix::Identity(m.rows(), m.cols());
    CMatrix term = CMatrix::Identity(m.rows(), m.cols());
    for (int k = 1; k <= 30; k++) {
        term = (term * a) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) {
            break;
        }
    }
    for (int i = 0; i < squarings; i++) {
        result = (result * result).eval();
    }
    return result;
}

namespace {

int padded_dim(int dim) {
    return dim + std::max(dim, 30);
}

double top_population(const CVector &v, int dim) {
    double mass = 0.0;
    for (int n = std::max(0, dim - kTailWidth); n < v.size(); n++) {
        mass += std::norm(v[n]);
    }
    return mass;
}

double top_population(const CMatrix &rho, int dim) {
    double mass = 0.0;
    for (int n = std::max(0, dim - kTailWidth); n < rho.rows(); n++) {
        mass += rho(n, n).real();
    }
    return mass;
}

void check_tail(double tail, double tolerance, const char *what) {
    if (!(tail <= tolerance)) {
        std::ostringstream ss;
        ss << "Fock truncation tail " << tail << " after " << what << " exceeds " << tolerance
           << "; raise the oracle dimension";
        throw NumericalError(ss.str());
    }
}

CMatrix squeeze_unitary(int work, double s) {
    ModeOperators ops = build_mode_operators(work);
    CMatrix gen = 0.5 * s * (ops.adag * ops.adag - ops.a * ops.a);
    return expm(gen);
}

CMatrix displace_unitary(int work, cd alpha) {
    ModeOperators ops = build_mode_operators(work);
    CMatrix gen = alpha * ops.adag - std::conj(alpha) * ops.a;
    return expm(gen);
}

FockVector apply_padded(const FockVector &state, const CMatrix &u, double tol, const char *what) {
    int dim = state.dim();
    CVector padded = CVector::Zero(u.rows());
    padded.head(dim) = state.amplitudes;
    CVector out = u * padded;
    check_tail(top_population(out, dim), tol, what);
    return FockVector{out.head(dim)};
}

FockDensityMatrix apply_padded(const FockDensityMatrix &state, const CMatrix &u, double tol, const char *what) {
    int dim = state.dim();
    CMatrix padded = CMatrix::Zero(u.rows(), u.cols());
    padded.topLeftCorner(dim, dim) = state.rho;
    CMatrix out = u * padded * u.adjoint();
    check_tail(top_population(out, dim) / std::max(state.trace(), 1e-300), tol, what);
    return FockDensityMatrix{out.topLeftCorner(dim, dim), state.normalized};
}

}  // namespace

double FockVector::tail_mass() const {
    return top_population(amplitudes, dim());
}

FockVector FockVector::basis(int dim, int n) {
    FockVector v{CVector::Zero(dim)};
    v.amplitudes[n] = 1.0;
    return v;
}

double FockDensityMatrix::trace() const {
    return rho.trace().real();
}

double FockDensityMatrix::tail_mass() const {
    return top_population(rho, dim());
}

FockDensityMatrix FockDensityMatrix::pure(const FockVector &v) {
    return FockDensityMatrix{v.amplitudes * v.amplitudes.adjoint(), true};
}

FockVector apply_squeeze(const FockVector &state, double s, double tail_tolerance) {
    return apply_padded(state, squeeze_unitary(padded_dim(state.dim()), s), tail_tolerance, "squeezing");
}

FockVector apply_displace(const FockVector &state, cd alpha, double tail_tolerance) {
    return apply_padded(state, displace_unitary(padded_dim(state.dim()), alpha), tail_tolerance, "displacement");
}

FockDensityMatrix apply_squeeze(const FockDensityMatrix &state, double s, double tail_tolerance) {
    return apply_padded(state, squeeze_unitary(padded_dim(state.dim()), s), tail_tolerance, "squeezing");
}

FockDensityMatrix apply_displace(const FockDensityMatrix &state, cd alpha, double tail_tolerance) {
    return apply_padded(state, displace_unitary(padded_dim(state.dim()), alpha), tail_tolerance, "displacement");
}

CMatrix beam_splitter_blocks(int dim, double T) {
    if (!(T > 0.0 && T <= 1.0)) {
        throw InvalidConfig("transmittance T must lie in (0, 1]");
    }
    double theta = std::acos(std::sqrt(T));
    CMatrix blocks = CMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; n++) {
        // Total photon number n is conserved; basis |n-k>_A |k>_B, k = 0..n.
        // Generator theta (a^dag b - a b^dag), so that b -> t b - r a.
        CMatrix gen = CMatrix::Zero(n + 1, n + 1);
        for (int k = 0; k < n; k++) {
            double c = theta * std::sqrt(static_cast<double>(n - k) * (k + 1));
            gen(k + 1, k) = -c;
            gen(k, k + 1) = c;
        }
        CMatrix u = expm(gen);
        for (int k = 0; k <= n; k++) {
            blocks(k, n) = u(k, 0);
        }
    }
    return blocks;
}

namespace {

FockDensityMatrix condition_ancilla(const FockDensityMatrix &rho, double T, const std::vector<double> &weights) {
    int dim = rho.dim();
    CMatrix u = beam_splitter_blocks(dim, T);
    CMatrix out = CMatrix::Zero(dim, dim);
    for (int m = 0; m < dim; m++) {
        for (int mp = 0; mp < dim; mp++) {
            cd r = rho.rho(m, mp);
            if (r == cd(0.0)) {
                continue;
            }
            int kmax = std::min(m, mp);
            for (int k = 0; k <= kmax; k++) {
                double w = weights[static_cast<size_t>(k)];
                if (w == 0.0) {
                    continue;
                }
                out(m - k, mp - k) += w * u(k, m) * std::conj(u(k, mp)) * r;
            }
        }
    }
    return FockDensityMatrix{out, false};
}

}  // namespace

FockDensityMatrix subtract_photon_click(const FockDensityMatrix &rho, double T, double eta) {
    if (!(T > 0.0 && T < 1.0)) {
        throw InvalidConfig("transmittance T must lie in (0, 1)");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw InvalidConfig("detector efficiency eta must lie in [0, 1]");
    }
    std::vector<double> weights(static_cast<size_t>(rho.dim()));
    for (int k = 0; k < rho.dim(); k++) {
        weights[static_cast<size_t>(k)] = 1.0 - std::pow(1.0 - eta, k);
    }
    return condition_ancilla(rho, T, weights);
}

FockDensityMatrix subtract_photons_resolved(const FockDensityMatrix &rho, double T, int photons) {
    std::vector<double> weights(static_cast<size_t>(rho.dim()), 0.0);
    if (photons >= 0 && photons < rho.dim()) {
        weights[static_cast<size_t>(photons)] = 1.0;
    }
    return condition_ancilla(rho, T, weights);
}

CMatrix split_on_beam_splitter(const FockVector &state, double T) {
    int dim = state.dim();
    CMatrix u = beam_splitter_blocks(dim, T);
    CMatrix amp = CMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; n++) {
        for (int k = 0; k <= n; k++) {
            amp(n - k, k) = u(k, n) * state.amplitudes[n];
        }
    }
    return amp;
}

namespace {

std::pair<CMatrix, CMatrix> quadrature_operators(int dim) {
    ModeOperators ops = build_mode_operators(dim);
    CMatrix x = (ops.a + ops.adag) / std::numbers::sqrt2;
    CMatrix p = (ops.a - ops.adag) / cd(0.0, std::numbers::sqrt2);
    return {x, p};
}

}  // namespace

TwoModeGaussian two_mode_moments(const CMatrix &amp) {
    int dim = static_cast<int>(amp.rows());
    auto [x, p] = quadrature_operators(dim);
    CMatrix applied[4] = {x * amp, p * amp, amp * x.transpose(), amp * p.transpose()};
    double norm2 = amp.squaredNorm();

    TwoModeGaussian g;
    for (int i = 0; i < 4; i++) {
        g.d_ab[i] = (amp.conjugate().cwiseProduct(applied[i])).sum().real() / norm2;
    }
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            double second = (applied[i].conjugate().cwiseProduct(applied[j])).sum().real() / norm2;
            g.gamma_ab(i, j) = 2.0 * second - 2.0 * g.d_ab[i] * g.d_ab[j];
        }
    }
    return g;
}

std::pair<QuadVector, CovarianceMatrix2> single_mode_moments(const FockDensityMatrix &rho) {
    auto [x, p] = quadrature_operators(rho.dim());
    const CMatrix *ops[2] = {&x, &p};
    double tr = rho.trace();
    QuadVector mean;
    CovarianceMatrix2 cov;
    for (int i = 0; i < 2; i++) {
        mean[i] = (rho.rho * *ops[i]).trace().real() / tr;
    }
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            CMatrix anti = *ops[i] * *ops[j] + *ops[j] * *ops[i];
            cov(i, j) = (rho.rho * anti).trace().real() / tr - 2.0 * mean[i] * mean[j];
        }
    }
    return {mean, cov};
}

double parity_wigner(const FockDensityMatrix &rho, const QuadVector &r) {
    cd alpha(r[0] / std::numbers::sqrt2, r[1] / std::numbers::sqrt2);
    FockDensityMatrix shifted = apply_displace(rho, -alpha, 1e-9);
    double acc = 0.0;
    for (int n = 0; n < shifted.dim(); n++) {
        acc += (n % 2 == 0 ? 1.0 : -1.0) * shifted.rho(n, n).real();
    }
    return acc / std::numbers::pi;
}

FockVector target_vector(const TargetSpec &target, int dim, double tail_tolerance) {
    if (target.n() >= dim) {
        throw InvalidConfig("Fock dimension too small for the target");
    }
    FockVector v{CVector::Zero(dim)};
    for (int n = 0; n <= target.n(); n++) {
        v.amplitudes[n] = target.coeffs[static_cast<size_t>(n)];
    }
    v = apply_squeeze(v, target.s, tail_tolerance);
    v.amplitudes.normalize();
    return v;
}

FockVector pure_state_predict(std::span<const cd> betas, double s, int dim, double tail_tolerance) {
    int n = static_cast<int>(betas.size());
    if (n >= dim) {
        throw InvalidConfig("Fock dimension too small for the requested number of roots");
    }
    ModeOperators ops = build_mode_operators(dim);
    CMatrix lowering_mix = std::cosh(s) * ops.a + std::sinh(s) * ops.adag;
    CVector v = CVector::Zero(dim);
    v[0] = 1.0;
    for (const cd &beta : betas) {
        v = (lowering_mix * v - beta * v).eval();
    }
    FockVector out{v};
    out = apply_squeeze(out, s, tail_tolerance);
    out.amplitudes.normalize();
    return out;
}

OracleResult oracle_simulate(const SetupConfig &cfg, const TargetSpec &target, const OracleOptions &options) {
    cfg.validate();
    target.validate();
    int dim = options.dim;
    double tol = options.tail_tolerance;

    OracleResult res;
    FockDensityMatrix rho = FockDensityMatrix::pure(FockVector::basis(dim, 0));
    auto track = [&](const FockDensityMatrix &r) {
        double tr = r.trace();
        if (tr > 0.0) {
            res.max_tail = std::max(res.max_tail, r.tail_mass() / tr);
        }
    };

    rho = apply_squeeze(rho, cfg.s_in, tol);
    track(rho);
    rho = apply_displace(rho, cfg.alphas[0], tol);
    track(rho);
    for (int k = 1; k <= cfg.subtractions(); k++) {
        rho = subtract_photon_click(rho, cfg.T, cfg.eta);
        track(rho);
        if (!(rho.trace() > 1e-300)) {
            throw NumericalError("oracle: zero click probability");
        }
        rho = apply_displace(rho, cfg.alphas[static_cast<size_t>(k)], tol);
        track(rho);
    }

    res.probability = rho.trace();
    FockVector psi = target_vector(target, dim, tol);
    res.fidelity = (psi.amplitudes.adjoint() * rho.rho * psi.amplitudes)(0, 0).real() / res.probability;
    rho.normalized = false;
    res.rho_out = std::move(rho);
    return res;
}

}  // namespace sqzsub::fock
