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

#include "sqzsub/state_analysis.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "sqzsub/errors.h"

namespace sqzsub {

double gaussian_wigner(const Mat2 &gamma, const QuadVector &d, const QuadVector &r) {
    QuadVector u = r - d;
    return std::sqrt(gamma.determinant()) / std::numbers::pi * std::exp(-u.dot(gamma * u));
}

double eval_mixture_wigner(const MixtureState &m, const QuadVector &r) {
    double acc = 0.0;
    for (const auto &t : m.terms) {
        acc += t.weight * gaussian_wigner(t.gamma, t.d, r);
    }
    return acc;
}

TargetWigner::TargetWigner(const TargetSpec &target) : coeffs_(target.coeffs), s_(target.s) {
    target.validate();
    int dim = target.n() + 1;
    kernel_norm_.assign(static_cast<size_t>(dim * dim), 0.0);
    for (int m = 0; m < dim; m++) {
        for (int n = 0; n <= m; n++) {
            // sqrt(n!/m!) = exp((lgamma(n+1) - lgamma(m+1))/2)
            double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
            double sign = (n % 2 == 0) ? 1.0 : -1.0;
            kernel_norm_[static_cast<size_t>(m * dim + n)] = sign * ratio / std::numbers::pi;
        }
    }
}

double TargetWigner::operator()(double x, double p) const {
    int top = static_cast<int>(coeffs_.size()) - 1;
    int dim = top + 1;
    double xs = x * std::exp(-s_);
    double ps = p * std::exp(s_);
    double rho2 = xs * xs + ps * ps;
    double y = 2.0 * rho2;
    double envelope = std::exp(-rho2);
    cd z(std::numbers::sqrt2 * xs, -std::numbers::sqrt2 * ps);

    double acc = 0.0;
    cd zk = 1.0;
    for (int k = 0; k <= top; k++) {
        // L_n^{(k)}(y) for n = 0..top-k by the three-term recurrence.
        double l_prev = 0.0;
        double l_cur = 1.0;
        for (int n = 0; n + k <= top; n++) {
            if (n == 1) {
                l_prev = 1.0;
                l_cur = 1.0 + k - y;
            } else if (n > 1) {
                double next = ((2.0 * (n - 1) + 1.0 + k - y) * l_cur - (n - 1.0 + k) * l_prev) / n;
                l_prev = l_cur;
                l_cur = next;
            }
            int m = n + k;
            double kernel = kernel_norm_[static_cast<size_t>(m * dim + n)] * l_cur;
            cd c = coeffs_[static_cast<size_t>(m)] * std::conj(coeffs_[static_cast<size_t>(n)]);
            if (k == 0) {
                acc += c.real() * kernel;
            } else {
                acc += 2.0 * (c * zk).real() * kernel;
            }
        }
        zk *= z;
    }
    return acc * envelope;
}

double target_wigner(const TargetSpec &target, const QuadVector &r) {
    return TargetWigner(target)(r[0], r[1]);
}

double SimpsonResult::error_estimate() const {
    return std::abs(fine - coarse) / 15.0;
}

namespace {

std::vector<double> simpson_weights(int points, double h) {
    std::vector<double> w(static_cast<size_t>(points));
    for (int i = 0; i < points; i++) {
        double c = (i == 0 || i == points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[static_cast<size_t>(i)] = c * h / 3.0;
    }
    return w;
}

std::vector<double> linspace(double a, double b, int points) {
    std::vector<double> v(static_cast<size_t>(points));
    double h = (b - a) / (points - 1);
    for (int i = 0; i < points; i++) {
        v[static_cast<size_t>(i)] = a + h * i;
    }
    v.back() = b;
    return v;
}

}  // namespace

SimpsonResult simpson_2d(const RowEvaluator &f, double x0, double x1, double p0, double p1, int points,
                         Execution execution) {
    if (points < 5 || points % 2 == 0 || (points - 1) % 4 != 0) {
        throw InvalidConfig("Simpson grid needs an odd node count with (points - 1) divisible by 4");
    }
    int coarse_points = (points - 1) / 2 + 1;
    double hx = (x1 - x0) / (points - 1);
    double hp = (p1 - p0) / (points - 1);
    std::vector<double> xs = linspace(x0, x1, points);
    std::vector<double> ps = linspace(p0, p1, points);
    std::vector<double> wx = simpson_weights(points, hx);
    std::vector<double> wp = simpson_weights(points, hp);
    std::vector<double> wxc = simpson_weights(coarse_points, 2.0 * hx);
    std::vector<double> wpc = simpson_weights(coarse_points, 2.0 * hp);

    std::vector<double> row_fine(static_cast<size_t>(points));
    std::vector<double> row_coarse(static_cast<size_t>(points));

    auto do_row = [&](int i, std::vector<double> &buf) {
        f(xs[static_cast<size_t>(i)], ps, buf);
        double fine = 0.0;
        double coarse = 0.0;
        for (int j = 0; j < points; j++) {
            fine += wp[static_cast<size_t>(j)] * buf[static_cast<size_t>(j)];
        }
        for (int j = 0; j < points; j += 2) {
            coarse += wpc[static_cast<size_t>(j / 2)] * buf[static_cast<size_t>(j)];
        }
        row_fine[static_cast<size_t>(i)] = fine;
        row_coarse[static_cast<size_t>(i)] = coarse;
    };

    if (execution == Execution::Parallel) {
#pragma omp parallel
        {
            std::vector<double> buf(static_cast<size_t>(points));
#pragma omp for schedule(static)
            for (int i = 0; i < points; i++) {
                do_row(i, buf);
            }
        }
    } else {
        std::vector<double> buf(static_cast<size_t>(points));
        for (int i = 0; i < points; i++) {
            do_row(i, buf);
        }
    }

    SimpsonResult res;
    for (int i = 0; i < points; i++) {
        res.fine += wx[static_cast<size_t>(i)] * row_fine[static_cast<size_t>(i)];
    }
    for (int i = 0; i < points; i += 2) {
        res.coarse += wxc[static_cast<size_t>(i / 2)] * row_coarse[static_cast<size_t>(i)];
    }
    return res;
}

namespace {

struct PackedTerm {
    double amplitude;  // C sqrt(det Gamma) / pi
    double g00, g01, g11;
    double dx, dp;
};

std::vector<PackedTerm> pack(const MixtureState &m, double scale) {
    std::vector<PackedTerm> out;
    out.reserve(m.terms.size());
    for (const auto &t : m.terms) {
        out.push_back(PackedTerm{scale * t.weight * std::sqrt(t.gamma.determinant()) / std::numbers::pi,
                                 t.gamma(0, 0), t.gamma(0, 1), t.gamma(1, 1), t.d[0], t.d[1]});
    }
    return out;
}

inline double eval_packed(const std::vector<PackedTerm> &terms, double x, double p) {
    double acc = 0.0;
    for (const auto &t : terms) {
        double u = x - t.dx;
        double v = p - t.dp;
        acc += t.amplitude * std::exp(-(t.g00 * u * u + 2.0 * t.g01 * u * v + t.g11 * v * v));
    }
    return acc;
}

// Long double path for grid export. Terms of nearly equal shape and weights of
// both signs cancel down to P, so double rounding shows up at the eps/P level.
struct ExtendedTerm {
    long double amplitude;
    long double g00, g01, g11;
    long double dx, dp;
};

std::vector<ExtendedTerm> pack_extended(const MixtureState &m) {
    std::vector<ExtendedTerm> out;
    out.reserve(m.terms.size());
    for (const auto &t : m.terms) {
        long double g00 = t.gamma(0, 0);
        long double g01 = t.gamma(0, 1);
        long double g11 = t.gamma(1, 1);
        long double det = g00 * g11 - g01 * g01;
        out.push_back(ExtendedTerm{t.weight * std::sqrt(det) / std::numbers::pi_v<long double>, g00, g01, g11,
                                   t.d[0], t.d[1]});
    }
    return out;
}

long double eval_extended(const std::vector<ExtendedTerm> &terms, double x, double p) {
    long double acc = 0.0L;
    for (const auto &t : terms) {
        long double u = x - t.dx;
        long double v = p - t.dp;
        acc += t.amplitude * std::exp(-(t.g00 * u * u + 2.0L * t.g01 * u * v + t.g11 * v * v));
    }
    return acc;
}

double checked_probability(const MixtureState &m) {
    double p = success_probability(m);
    if (!(p > 1e-300)) {
        throw NumericalError("mixture has zero success probability");
    }
    return p;
}

}  // namespace

double quadrature_radius(const MixtureState &m, const QuadratureOptions &options) {
    double max_d = 0.0;
    double cover = 0.0;
    for (const auto &t : m.terms) {
        double dn = t.d.norm();
        max_d = std::max(max_d, dn);
        // Widest standard deviation of the term: largest eigenvalue of Gamma^-1 / 2.
        Eigen::SelfAdjointEigenSolver<Mat2> es(t.gamma, Eigen::EigenvaluesOnly);
        double sigma = std::sqrt(0.5 / es.eigenvalues().minCoeff());
        cover = std::max(cover, dn + options.sigma_cover * sigma);
    }
    return std::max(options.floor_radius + max_d, cover);
}

FidelityReport fidelity(const MixtureState &m, const TargetSpec &target, const QuadratureOptions &options) {
    FidelityReport rep;
    rep.probability = checked_probability(m);
    rep.domain_radius = quadrature_radius(m, options);
    std::vector<PackedTerm> terms = pack(m, 1.0 / rep.probability);
    TargetWigner tw(target);

    RowEvaluator row = [&](double x, std::span<const double> ps, std::span<double> out) {
        for (size_t j = 0; j < ps.size(); j++) {
            out[j] = eval_packed(terms, x, ps[j]) * tw(x, ps[j]);
        }
    };
    double r = rep.domain_radius;
    SimpsonResult sr = simpson_2d(row, -r, r, -r, r, options.points, options.execution);
    rep.fidelity = 2.0 * std::numbers::pi * sr.fine;
    rep.quadrature_error_estimate = 2.0 * std::numbers::pi * sr.error_estimate();
    rep.flagged = rep.quadrature_error_estimate > options.flag_threshold;
    return rep;
}

double mixture_overlap(const MixtureState &a, const MixtureState &b, const QuadratureOptions &options) {
    std::vector<PackedTerm> ta = pack(a, 1.0 / checked_probability(a));
    std::vector<PackedTerm> tb = pack(b, 1.0 / checked_probability(b));
    double r = std::max(quadrature_radius(a, options), quadrature_radius(b, options));
    RowEvaluator row = [&](double x, std::span<const double> ps, std::span<double> out) {
        for (size_t j = 0; j < ps.size(); j++) {
            out[j] = eval_packed(ta, x, ps[j]) * eval_packed(tb, x, ps[j]);
        }
    };
    return 2.0 * std::numbers::pi * simpson_2d(row, -r, r, -r, r, options.points, options.execution).fine;
}

WignerGrid export_wigner_grid(const std::function<double(double, double)> &w, const GridBounds &bounds,
                              int resolution, Execution execution) {
    if (resolution < 16) {
        throw InvalidConfig("Wigner grid resolution must be at least 16");
    }
    if (!(bounds.x_max > bounds.x_min && bounds.p_max > bounds.p_min)) {
        throw InvalidConfig("Wigner grid bounds are empty");
    }
    WignerGrid g;
    g.bounds = bounds;
    g.resolution = resolution;
    int n = resolution + 1;
    g.x_axis = linspace(bounds.x_min, bounds.x_max, n);
    g.p_axis = linspace(bounds.p_min, bounds.p_max, n);
    g.values.resize(static_cast<size_t>(n) * static_cast<size_t>(n));
    auto fill_row = [&](int i) {
        for (int j = 0; j < n; j++) {
            g.values[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] =
                w(g.x_axis[static_cast<size_t>(i)], g.p_axis[static_cast<size_t>(j)]);
        }
    };
    if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; i++) {
            fill_row(i);
        }
    } else {
        for (int i = 0; i < n; i++) {
            fill_row(i);
        }
    }
    return g;
}

WignerGrid export_wigner_grid(const MixtureState &m, const GridBounds &bounds, int resolution,
                              Execution execution) {
    checked_probability(m);
    long double prob = 0.0L;
    for (const auto &t : m.terms) {
        prob += t.weight;
    }
    std::vector<ExtendedTerm> terms = pack_extended(m);
    return export_wigner_grid(
        [&](double x, double p) { return static_cast<double>(eval_extended(terms, x, p) / prob); }, bounds,
        resolution, execution);
}

WignerGrid export_wigner_grid(const TargetSpec &target, const GridBounds &bounds, int resolution,
                              Execution execution) {
    TargetWigner tw(target);
    return export_wigner_grid([&](double x, double p) { return tw(x, p); }, bounds, resolution, execution);
}

namespace {

std::vector<double> axis_weights(int nodes, double h) {
    int cells = nodes - 1;
    if (cells % 2 == 0) {
        return simpson_weights(nodes, h);
    }
    std::vector<double> w(static_cast<size_t>(nodes), h);
    w.front() = w.back() = 0.5 * h;
    return w;
}

template <class F>
double integrate_weighted(const WignerGrid &g, F &&moment) {
    size_t nx = g.x_axis.size();
    size_t np = g.p_axis.size();
    std::vector<double> wx = axis_weights(static_cast<int>(nx), g.x_axis[1] - g.x_axis[0]);
    std::vector<double> wp = axis_weights(static_cast<int>(np), g.p_axis[1] - g.p_axis[0]);
    double acc = 0.0;
    for (size_t i = 0; i < nx; i++) {
        double row = 0.0;
        for (size_t j = 0; j < np; j++) {
            row += wp[j] * moment(g.x_axis[i], g.p_axis[j]) * g.values[i * np + j];
        }
        acc += wx[i] * row;
    }
    return acc;
}

}  // namespace

double grid_integral(const WignerGrid &g) {
    return integrate_weighted(g, [](double, double) { return 1.0; });
}

GridMoments grid_moments(const WignerGrid &g) {
    GridMoments m;
    m.norm = grid_integral(g);
    m.mean[0] = integrate_weighted(g, [](double x, double) { return x; }) / m.norm;
    m.mean[1] = integrate_weighted(g, [](double, double p) { return p; }) / m.norm;
    double mx = m.mean[0];
    double mp = m.mean[1];
    m.covariance(0, 0) = integrate_weighted(g, [&](double x, double) { return (x - mx) * (x - mx); }) / m.norm;
    m.covariance(1, 1) = integrate_weighted(g, [&](double, double p) { return (p - mp) * (p - mp); }) / m.norm;
    m.covariance(0, 1) = m.covariance(1, 0) =
        integrate_weighted(g, [&](double x, double p) { return (x - mx) * (p - mp); }) / m.norm;
    return m;
}

}  // namespace sqzsub
