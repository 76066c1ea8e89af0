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

#ifndef SQZSUB_GAUSSIAN_CORE_H
#define SQZSUB_GAUSSIAN_CORE_H

#include <complex>

#include <Eigen/Core>
#include <Eigen/LU>

namespace sqzsub {

// Quadrature convention used throughout the library: the vacuum has
// covariance matrix I (variance 1/2 per quadrature in units where
// x = (a + a^dag)/sqrt(2)), and a Gaussian Wigner function with inverse
// covariance G and mean d reads sqrt(det G)/pi * exp(-(r-d)^T G (r-d)).
// A coherent displacement alpha shifts the mean by sqrt(2)(Re alpha, Im alpha).

using QuadVector = Eigen::Vector2d;
using CovarianceMatrix2 = Eigen::Matrix2d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

/// Two-mode Gaussian state (principal mode A, ancilla B) in (x_A, p_A, x_B, p_B) order.
struct TwoModeGaussian {
    Mat4 gamma_ab;
    Vec4 d_ab;
};

/// A|B blocks of Gamma_AB = gamma_AB^-1.
struct BlockDecomposition {
    Mat2 upsilon_a;
    Mat2 sigma;
    Mat2 upsilon_b;
    Mat4 gamma_inverse;
    double det_gamma_inverse = 0.0;
};

/// Squeezing in dB is 10 log10(e^{2s}).
double squeezing_from_db(double s_db);
double squeezing_to_db(double s);

QuadVector displacement_vector(std::complex<double> alpha);

/// diag(e^{2 s_in}, e^{-2 s_in}).
CovarianceMatrix2 squeezed_vacuum_covariance(double s_in);

/// Closed-form adjugate inverse. Throws NumericalError when the determinant
/// is not safely nonzero.
Mat2 inverse2(const Mat2 &m);

/// Cofactor inverse of a 4x4 matrix. Throws NumericalError when the
/// 1-norm condition number exceeds max_condition.
Mat4 inverse4(const Mat4 &m, double *det_out = nullptr, double max_condition = 1e12);

/// The 4x4 beam-splitter coupling with amplitude transmittance t = sqrt(T):
///   [ t 0 r 0 ; 0 t 0 r ; -r 0 t 0 ; 0 -r 0 t ],  r = sqrt(1 - T).
Mat4 beam_splitter_symplectic(double T);

/// Mixes mode A (covariance gamma_a, mean d_a) with vacuum B on the
/// subtraction beam splitter, then attenuates B by eta to model the
/// detector efficiency:
///   gamma_AB = S (gamma_a (+) I) S^T + G,  S = S_eta S_BS,
///   S_eta = I (+) sqrt(eta) I,  G = 0 (+) (1 - eta) I,  d_AB = S (d_a, 0).
TwoModeGaussian lossy_bs_map(const CovarianceMatrix2 &gamma_a, const QuadVector &d_a, double T, double eta);

BlockDecomposition block_decompose(const TwoModeGaussian &state);

/// Inverse of block_decompose: reassembles Gamma_AB from its blocks.
Mat4 reassemble(const BlockDecomposition &blocks);

}  // namespace sqzsub

#endif
