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

#include "sqzsub/gaussian_core.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "sqzsub/errors.h"

namespace sqzsub {

double squeezing_from_db(double s_db) {
    return s_db * std::numbers::ln10 / 20.0;
}

double squeezing_to_db(double s) {
    return s * 20.0 / std::numbers::ln10;
}

QuadVector displacement_vector(std::complex<double> alpha) {
    return QuadVector(std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag());
}

CovarianceMatrix2 squeezed_vacuum_covariance(double s_in) {
    CovarianceMatrix2 g = CovarianceMatrix2::Zero();
    g(0, 0) = std::exp(2.0 * s_in);
    g(1, 1) = std::exp(-2.0 * s_in);
    return g;
}

Mat2 inverse2(const Mat2 &m) {
    double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double scale = m.cwiseAbs().maxCoeff();
    if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale * scale) {
        std::ostringstream ss;
        ss << "singular 2x2 matrix (det=" << det << ")";
        throw NumericalError(ss.str());
    }
    Mat2 adj;
    adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return adj / det;
}

Mat4 inverse4(const Mat4 &m, double *det_out, double max_condition) {
    // Eigen's fixed-size 4x4 inverse is the closed-form cofactor expansion.
    double det = m.determinant();
    if (!std::isfinite(det) || det == 0.0) {
        throw NumericalError("singular 4x4 matrix");
    }
    Mat4 inv = m.inverse();
    double cond = m.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(cond) || cond > max_condition) {
        std::ostringstream ss;
        ss << "ill-conditioned 4x4 matrix (condition number " << cond << " > " << max_condition << ")";
        throw NumericalError(ss.str());
    }
    if (det_out != nullptr) {
        *det_out = det;
    }
    return inv;
}

Mat4 beam_splitter_symplectic(double T) {
    double t = std::sqrt(T);
    double r = std::sqrt(1.0 - T);
    Mat4 s;
    s << t, 0, r, 0,  //
        0, t, 0, r,   //
        -r, 0, t, 0,  //
        0, -r, 0, t;
    return s;
}

TwoModeGaussian lossy_bs_map(const CovarianceMatrix2 &gamma_a, const QuadVector &d_a, double T, double eta) {
    if (!(T > 0.0 && T < 1.0)) {
        throw InvalidConfig("transmittance T must lie in (0, 1), got " + std::to_string(T));
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw InvalidConfig("detector efficiency eta must lie in [0, 1], got " + std::to_string(eta));
    }

    Mat4 s_eta = Mat4::Identity();
    s_eta(2, 2) = s_eta(3, 3) = std::sqrt(eta);
    Mat4 s = s_eta * beam_splitter_symplectic(T);

    Mat4 in = Mat4::Identity();
    in.topLeftCorner<2, 2>() = gamma_a;
    Mat4 noise = Mat4::Zero();
    noise(2, 2) = noise(3, 3) = 1.0 - eta;

    Vec4 d_in = Vec4::Zero();
    d_in.head<2>() = d_a;

    TwoModeGaussian out;
    out.gamma_ab = s * in * s.transpose() + noise;
    // Symmetrize away rounding so downstream blocks stay exactly symmetric.
    out.gamma_ab = 0.5 * (out.gamma_ab + out.gamma_ab.transpose()).eval();
    out.d_ab = s * d_in;
    return out;
}

BlockDecomposition block_decompose(const TwoModeGaussian &state) {
    BlockDecomposition b;
    b.gamma_inverse = inverse4(state.gamma_ab, nullptr);
    b.gamma_inverse = 0.5 * (b.gamma_inverse + b.gamma_inverse.transpose()).eval();
    b.det_gamma_inverse = b.gamma_inverse.determinant();
    b.upsilon_a = b.gamma_inverse.topLeftCorner<2, 2>();
    b.sigma = b.gamma_inverse.topRightCorner<2, 2>();
    b.upsilon_b = b.gamma_inverse.bottomRightCorner<2, 2>();
    return b;
}

Mat4 reassemble(const BlockDecomposition &blocks) {
    Mat4 g;
    g.topLeftCorner<2, 2>() = blocks.upsilon_a;
    g.topRightCorner<2, 2>() = blocks.sigma;
    g.bottomLeftCorner<2, 2>() = blocks.sigma.transpose();
    g.bottomRightCorner<2, 2>() = blocks.upsilon_b;
    return g;
}

}  // namespace sqzsub
