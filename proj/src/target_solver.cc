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

#include "sqzsub/target_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sqzsub/errors.h"

namespace sqzsub {

TargetSpec TargetSpec::make(std::vector<cd> coeffs, double s) {
    if (coeffs.empty()) {
        throw InvalidConfig("target needs at least one Fock coefficient");
    }
    double norm2 = 0.0;
    for (const auto &c : coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InvalidConfig("target coefficients must be finite");
        }
        norm2 += std::norm(c);
    }
    if (!(norm2 > 0.0)) {
        throw InvalidConfig("target coefficients are all zero");
    }
    if (std::abs(norm2 - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
        double inv = 1.0 / std::sqrt(norm2);
        for (auto &c : coeffs) {
            c *= inv;
        }
    }
    TargetSpec t{std::move(coeffs), s};
    t.validate();
    return t;
}

void TargetSpec::validate() const {
    if (coeffs.empty()) {
        throw InvalidConfig("target needs at least one Fock coefficient");
    }
    if (!std::isfinite(s) || s < 0.0) {
        throw InvalidConfig("target squeezing must be finite and non-negative");
    }
    double norm2 = 0.0;
    for (const auto &c : coeffs) {
        norm2 += std::norm(c);
    }
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw InvalidConfig("target coefficients are not normalized");
    }
    if (std::abs(coeffs.back()) < 1e-12) {
        std::ostringstream ss;
        ss << "top Fock coefficient c_" << n()
           << " vanishes; drop it and use one subtraction less";
        throw InvalidConfig(ss.str());
    }
}

double reduced_squeezing(double s_in, double T, int n) {
    return std::atanh(std::pow(T, n) * std::tanh(s_in));
}

double required_input_squeezing(double s, double T, int n) {
    double tn = std::pow(T, n);
    double x = std::tanh(s) / tn;
    if (!(x < 1.0)) {
        std::ostringstream ss;
        ss << "target squeezing s=" << s << " is unreachable with T=" << T << " and N=" << n
           << "; the maximum achievable squeezing is s < atanh(T^N) = " << std::atanh(tn);
        throw InfeasiblePhysics(ss.str());
    }
    return std::atanh(x);
}

std::vector<double> ladder_power_table(double s, int n_max) {
    int dim = n_max + 1;
    double ch = std::cosh(s);
    double sh = std::sinh(s);
    std::vector<double> table(static_cast<size_t>(dim * dim), 0.0);
    table[0] = 1.0;
    for (int k = 1; k <= n_max; k++) {
        const double *prev = &table[static_cast<size_t>(dim * (k - 1))];
        double *cur = &table[static_cast<size_t>(dim * k)];
        for (int m = 0; m < k; m++) {
            // a|m> = sqrt(m)|m-1>, a^dag|m> = sqrt(m+1)|m+1>.
            if (m > 0) {
                cur[m - 1] += ch * std::sqrt(static_cast<double>(m)) * prev[m];
            }
            cur[m + 1] += sh * std::sqrt(static_cast<double>(m + 1)) * prev[m];
        }
    }
    return table;
}

std::vector<cd> compute_h_coeffs(const TargetSpec &target) {
    target.validate();
    int n = target.n();
    if (n > 0 && target.s == 0.0) {
        throw InvalidConfig("target squeezing must be nonzero for N >= 1 subtractions");
    }
    int dim = n + 1;
    std::vector<double> table = ladder_power_table(target.s, n);
    auto at = [&](int m, int k) { return table[static_cast<size_t>(m + dim * k)]; };

    // Back substitution: the highest Fock level m only appears in A^k|0> for k >= m.
    std::vector<cd> h(static_cast<size_t>(dim));
    for (int m = n; m >= 0; m--) {
        cd acc = target.coeffs[static_cast<size_t>(m)];
        for (int k = m + 1; k <= n; k++) {
            acc -= at(m, k) * h[static_cast<size_t>(k)];
        }
        h[static_cast<size_t>(m)] = acc / at(m, m);
    }
    return h;
}

namespace {

cd eval_poly(std::span<const cd> h, cd x) {
    cd acc = 0.0;
    for (size_t k = h.size(); k-- > 0;) {
        acc = acc * x + h[k];
    }
    return acc;
}

cd eval_poly_derivative(std::span<const cd> h, cd x) {
    cd acc = 0.0;
    for (size_t k = h.size(); k-- > 1;) {
        acc = acc * x + static_cast<double>(k) * h[k];
    }
    return acc;
}

}  // namespace

std::vector<cd> solve_betas(std::span<const cd> h) {
    if (h.empty()) {
        throw InvalidConfig("empty polynomial");
    }
    int n = static_cast<int>(h.size()) - 1;
    double max_h = 0.0;
    for (const auto &c : h) {
        max_h = std::max(max_h, std::abs(c));
    }
    if (std::abs(h.back()) <= 1e-300 || std::abs(h.back()) < 1e-14 * max_h) {
        throw InvalidConfig("leading polynomial coefficient h_N vanishes");
    }
    if (n == 0) {
        return {};
    }

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; i++) {
        companion(i, i - 1) = 1.0;
    }
    for (int i = 0; i < n; i++) {
        companion(i, n - 1) = -h[static_cast<size_t>(i)] / h.back();
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("companion-matrix eigenvalue iteration did not converge");
    }

    std::vector<cd> roots(static_cast<size_t>(n));
    double root_scale = 1.0;
    for (int i = 0; i < n; i++) {
        cd r = solver.eigenvalues()[i];
        cd dp = eval_poly_derivative(h, r);
        if (std::abs(dp) > 0.0) {
            cd polished = r - eval_poly(h, r) / dp;
            if (std::abs(eval_poly(h, polished)) < std::abs(eval_poly(h, r))) {
                r = polished;
            }
        }
        roots[static_cast<size_t>(i)] = r;
        root_scale = std::max(root_scale, std::abs(r));
    }

    for (const auto &r : roots) {
        double residual = std::abs(eval_poly(h, r)) / max_h;
        if (!(residual < 1e-9)) {
            std::ostringstream ss;
            ss << "root " << r << " has scaled residual " << residual;
            throw NumericalError(ss.str());
        }
    }

    // Real parts that agree to rounding (conjugate pairs, repeated roots)
    // are ordered by imaginary part.
    double tie = 1e-10 * root_scale;
    std::sort(roots.begin(), roots.end(), [tie](cd a, cd b) {
        if (std::abs(a.real() - b.real()) > tie) {
            return a.real() < b.real();
        }
        return a.imag() < b.imag();
    });
    return roots;
}

namespace {

std::vector<int> checked_ordering(std::span<const int> ordering, size_t n) {
    std::vector<int> perm(n);
    if (ordering.empty()) {
        std::iota(perm.begin(), perm.end(), 0);
        return perm;
    }
    if (ordering.size() != n) {
        throw InvalidConfig("root ordering has the wrong length");
    }
    perm.assign(ordering.begin(), ordering.end());
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < n; i++) {
        if (sorted[i] != static_cast<int>(i)) {
            throw InvalidConfig("root ordering is not a permutation");
        }
    }
    return perm;
}

}  // namespace

std::vector<cd> solve_alphas(std::span<const cd> betas, double T, double s, std::span<const int> ordering) {
    if (!(T > 0.0 && T < 1.0)) {
        throw InvalidConfig("transmittance T must lie in (0, 1)");
    }
    int n = static_cast<int>(betas.size());
    std::vector<int> perm = checked_ordering(ordering, betas.size());
    std::vector<cd> beta(betas.size());
    for (size_t i = 0; i < betas.size(); i++) {
        beta[i] = betas[static_cast<size_t>(perm[i])];
    }

    double t = std::sqrt(T);
    // alphas[j - 1] holds alpha_j; beta[j - 1] holds beta_j.
    std::vector<cd> alphas(static_cast<size_t>(n + 1));
    if (n >= 1) {
        alphas[static_cast<size_t>(n)] = beta[static_cast<size_t>(n - 1)];
    }
    for (int j = n; j >= 2; j--) {
        alphas[static_cast<size_t>(j - 1)] =
            (beta[static_cast<size_t>(j - 2)] - beta[static_cast<size_t>(j - 1)]) / std::pow(t, n + 1 - j);
    }

    // cosh(s) [t^N alpha_1 + L] = sinh(s) [t^-N conj(alpha_1) + conj(R)], with
    // L = sum_{j>=2} alpha_j t^{N+1-j} and R = sum_{j>=2} alpha_j t^{j-N-1}.
    // Splitting alpha_1 = a + i b decouples the real and imaginary parts.
    cd left = 0.0;
    cd right = 0.0;
    for (int j = 2; j <= n + 1; j++) {
        left += alphas[static_cast<size_t>(j - 1)] * std::pow(t, n + 1 - j);
        right += alphas[static_cast<size_t>(j - 1)] * std::pow(t, j - n - 1);
    }
    double ch = std::cosh(s);
    double sh = std::sinh(s);
    double tn = std::pow(t, n);
    cd rhs = sh * std::conj(right) - ch * left;
    double coef_re = ch * tn - sh / tn;
    double coef_im = ch * tn + sh / tn;
    if (std::abs(coef_re) < 1e-13 * coef_im) {
        std::ostringstream ss;
        ss << "vanishing-displacement constraint is singular: cosh(s) t^N = sinh(s) t^-N at s=" << s
           << ", T=" << T << ", N=" << n;
        throw NumericalError(ss.str());
    }
    alphas[0] = cd(rhs.real() / coef_re, rhs.imag() / coef_im);
    return alphas;
}

double constraint_residual(std::span<const cd> alphas, double T, double s) {
    int n = static_cast<int>(alphas.size()) - 1;
    double t = std::sqrt(T);
    cd lhs = 0.0;
    cd rhs = 0.0;
    for (int j = 1; j <= n + 1; j++) {
        cd a = alphas[static_cast<size_t>(j - 1)];
        lhs += a * std::pow(t, n + 1 - j);
        rhs += std::conj(a) * std::pow(t, j - n - 1);
    }
    return std::abs(std::cosh(s) * lhs - std::sinh(s) * rhs);
}

Recipe design_setup(const TargetSpec &target, double T, double eta, SqueezingPolicy policy,
                    std::span<const int> ordering) {
    target.validate();
    if (!(T > 0.0 && T < 1.0)) {
        throw InvalidConfig("transmittance T must lie in (0, 1)");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw InvalidConfig("detector efficiency eta must lie in [0, 1]");
    }
    int n = target.n();

    Recipe recipe;
    recipe.target = target;
    if (policy.s_in.has_value()) {
        if (!std::isfinite(*policy.s_in) || *policy.s_in < 0.0) {
            throw InvalidConfig("input squeezing must be finite and non-negative");
        }
        recipe.setup.s_in = *policy.s_in;
        recipe.target.s = reduced_squeezing(*policy.s_in, T, n);
    } else {
        recipe.setup.s_in = required_input_squeezing(target.s, T, n);
    }
    recipe.setup.T = T;
    recipe.setup.eta = eta;

    recipe.h = compute_h_coeffs(recipe.target);
    std::vector<cd> canonical = solve_betas(recipe.h);
    recipe.ordering = checked_ordering(ordering, canonical.size());
    recipe.betas.resize(canonical.size());
    for (size_t i = 0; i < canonical.size(); i++) {
        recipe.betas[i] = canonical[static_cast<size_t>(recipe.ordering[i])];
    }
    recipe.setup.alphas = solve_alphas(recipe.betas, T, recipe.target.s);
    recipe.constraint_residual = constraint_residual(recipe.setup.alphas, T, recipe.target.s);

    double scale = 1.0;
    for (const auto &a : recipe.setup.alphas) {
        scale = std::max(scale, std::abs(a) * std::cosh(recipe.target.s) / std::pow(T, 0.5 * n));
    }
    if (recipe.constraint_residual > 1e-10 * scale) {
        std::ostringstream ss;
        ss << "displacement constraint residual " << recipe.constraint_residual << " too large";
        throw NumericalError(ss.str());
    }
    return recipe;
}

std::vector<std::vector<int>> enumerate_orderings(int n) {
    if (n < 0 || n > 5) {
        throw InvalidConfig("root orderings are only enumerated for N <= 5");
    }
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace sqzsub
