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

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "sqzsub/errors.h"
#include "sqzsub/fock_oracle.h"

using namespace sqzsub;

namespace {

double max_abs_diff(const Mat4 &a, const Mat4 &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(gaussian_core, squeezed_vacuum_covariance) {
    EXPECT_EQ(squeezed_vacuum_covariance(0.0), Mat2::Identity());
    for (double s : {-0.7, 0.1, 0.4, 1.3}) {
        EXPECT_NEAR(squeezed_vacuum_covariance(s).determinant(), 1.0, 1e-14);
    }
    double s = squeezing_from_db(1.0);
    EXPECT_NEAR(s, 0.115129, 1e-6);
    Mat2 g = squeezed_vacuum_covariance(s);
    EXPECT_NEAR(g(0, 0), 1.258925, 1e-6);
    EXPECT_NEAR(g(1, 1), 0.794328, 1e-6);
    EXPECT_EQ(g(0, 1), 0.0);
    EXPECT_EQ(g(1, 0), 0.0);
}

TEST(gaussian_core, db_conversion_round_trip) {
    for (double db : {0.0, 0.36, 1.66, 3.24, 8.0}) {
        EXPECT_NEAR(squeezing_to_db(squeezing_from_db(db)), db, 1e-13);
    }
    EXPECT_NEAR(squeezing_from_db(2.0), 0.23026, 1e-5);
}

TEST(gaussian_core, displacement_vector) {
    QuadVector z = displacement_vector({1.0, 0.0});
    EXPECT_DOUBLE_EQ(z(0), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(z(1), 0.0);
    z = displacement_vector({0.5, -0.25});
    EXPECT_DOUBLE_EQ(z(0), 0.5 * std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(z(1), -0.25 * std::sqrt(2.0));
}

TEST(gaussian_core, vacuum_is_fixed_point) {
    for (double T : {0.1, 0.5, 0.95}) {
        for (double eta : {0.0, 0.25, 1.0}) {
            TwoModeGaussian ab = lossy_bs_map(Mat2::Identity(), QuadVector::Zero(), T, eta);
            EXPECT_LT(max_abs_diff(ab.gamma_ab, Mat4::Identity()), 1e-15);
            EXPECT_EQ(ab.d_ab, Vec4::Zero());
        }
    }
}

TEST(gaussian_core, blind_detector_decouples_ancilla) {
    TwoModeGaussian ab = lossy_bs_map(squeezed_vacuum_covariance(0.4), QuadVector(0.3, -0.2), 0.9, 0.0);
    EXPECT_LT((ab.gamma_ab.block<2, 2>(2, 2) - Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_TRUE((ab.gamma_ab.block<2, 2>(0, 2).isZero(0.0)));
    EXPECT_TRUE((ab.gamma_ab.block<2, 2>(2, 0).isZero(0.0)));
    EXPECT_EQ(ab.d_ab.tail<2>(), QuadVector::Zero());
}

TEST(gaussian_core, lossy_bs_map_matches_fock_moments) {
    double s = 0.2;
    double T = 0.95;
    TwoModeGaussian ab = lossy_bs_map(squeezed_vacuum_covariance(s), QuadVector::Zero(), T, 1.0);

    fock::FockVector sq = fock::apply_squeeze(fock::FockVector::basis(40, 0), s);
    TwoModeGaussian ref = fock::two_mode_moments(fock::split_on_beam_splitter(sq, T));
    EXPECT_LT(max_abs_diff(ab.gamma_ab, ref.gamma_ab), 1e-8);
    EXPECT_LT((ab.d_ab - ref.d_ab).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(gaussian_core, lossy_bs_map_displacement_matches_fock_moments) {
    double s = 0.15;
    double T = 0.9;
    std::complex<double> alpha(0.4, -0.3);
    TwoModeGaussian ab = lossy_bs_map(squeezed_vacuum_covariance(s), displacement_vector(alpha), T, 1.0);

    fock::FockVector v = fock::apply_displace(fock::apply_squeeze(fock::FockVector::basis(40, 0), s), alpha);
    TwoModeGaussian ref = fock::two_mode_moments(fock::split_on_beam_splitter(v, T));
    EXPECT_LT(max_abs_diff(ab.gamma_ab, ref.gamma_ab), 1e-8);
    EXPECT_LT((ab.d_ab - ref.d_ab).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(gaussian_core, symplectic_purity_at_unit_efficiency) {
    for (double s : {0.0, 0.3, 0.9}) {
        Mat2 g = squeezed_vacuum_covariance(s);
        g(0, 1) = g(1, 0) = 0.1;
        TwoModeGaussian ab = lossy_bs_map(g, QuadVector::Zero(), 0.8, 1.0);
        EXPECT_NEAR(ab.gamma_ab.determinant(), g.determinant(), 1e-12);
    }
    Mat4 S = beam_splitter_symplectic(0.7);
    Mat4 J = Mat4::Zero();
    J(0, 1) = J(2, 3) = 1.0;
    J(1, 0) = J(3, 2) = -1.0;
    EXPECT_LT(max_abs_diff(S * J * S.transpose(), J), 1e-15);
}

TEST(gaussian_core, near_unit_transmittance_leaves_a_block) {
    Mat2 g = squeezed_vacuum_covariance(0.5);
    double T = 1.0 - 1e-6;
    TwoModeGaussian ab = lossy_bs_map(g, QuadVector::Zero(), T, 1.0);
    double dev = (ab.gamma_ab.block<2, 2>(0, 0) - g).cwiseAbs().maxCoeff();
    EXPECT_LT(dev, 10.0 * (1.0 - T));
}

TEST(gaussian_core, lossy_bs_map_rejects_bad_parameters) {
    Mat2 g = Mat2::Identity();
    QuadVector d = QuadVector::Zero();
    EXPECT_THROW(lossy_bs_map(g, d, 0.0, 0.5), InvalidConfig);
    EXPECT_THROW(lossy_bs_map(g, d, 1.0, 0.5), InvalidConfig);
    EXPECT_THROW(lossy_bs_map(g, d, 0.5, -0.1), InvalidConfig);
    EXPECT_THROW(lossy_bs_map(g, d, 0.5, 1.1), InvalidConfig);
}

TEST(gaussian_core, block_decompose_identity) {
    BlockDecomposition b = block_decompose(TwoModeGaussian{Mat4::Identity(), Vec4::Zero()});
    EXPECT_EQ(b.upsilon_a, Mat2::Identity());
    EXPECT_EQ(b.upsilon_b, Mat2::Identity());
    EXPECT_EQ(b.sigma, Mat2::Zero());
}

TEST(gaussian_core, block_decompose_block_diagonal) {
    Mat2 ga = squeezed_vacuum_covariance(0.3);
    ga(0, 1) = ga(1, 0) = 0.2;
    Mat2 gb = squeezed_vacuum_covariance(-0.2);
    Mat4 g = Mat4::Zero();
    g.block<2, 2>(0, 0) = ga;
    g.block<2, 2>(2, 2) = gb;
    BlockDecomposition b = block_decompose(TwoModeGaussian{g, Vec4::Zero()});
    EXPECT_LT(b.sigma.cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((b.upsilon_a - ga.inverse()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(gaussian_core, reassembly_inverts_lossy_output) {
    TwoModeGaussian ab = lossy_bs_map(squeezed_vacuum_covariance(0.2), QuadVector::Zero(), 0.95, 1.0);
    BlockDecomposition b = block_decompose(ab);
    Mat4 prod = reassemble(b) * ab.gamma_ab;
    EXPECT_LT(max_abs_diff(prod, Mat4::Identity()), 1e-10);
}

TEST(gaussian_core, reassemble_round_trip) {
    for (double s : {0.05, 0.4, 1.0}) {
        for (double eta : {0.1, 0.6, 1.0}) {
            TwoModeGaussian ab = lossy_bs_map(squeezed_vacuum_covariance(s), QuadVector(0.1, 0.2), 0.9, eta);
            BlockDecomposition b = block_decompose(ab);
            Mat4 back = reassemble(b);
            double rel = (back - b.gamma_inverse).norm() / b.gamma_inverse.norm();
            EXPECT_LT(rel, 1e-12);
            EXPECT_LT((b.upsilon_a - b.upsilon_a.transpose()).cwiseAbs().maxCoeff(), 1e-14);
            EXPECT_LT((b.upsilon_b - b.upsilon_b.transpose()).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(gaussian_core, ill_conditioned_inverse_rejected) {
    Mat4 m = Mat4::Identity();
    m(3, 3) = 1e-14;
    EXPECT_THROW(inverse4(m), NumericalError);
    EXPECT_THROW(block_decompose(TwoModeGaussian{m, Vec4::Zero()}), NumericalError);
    Mat2 z = Mat2::Zero();
    EXPECT_THROW(inverse2(z), NumericalError);
}
