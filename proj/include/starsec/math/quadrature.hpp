// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

/**
 * @file quadrature.hpp
 * @brief Fixed Gauss-Laguerre / Chebyshev-Gauss rules and an adaptive
 *        Gauss-Kronrod integrator.
 */

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

namespace starsec::math {

enum class RuleKind { GaussLaguerre, ChebyshevGauss };

/**
 * A fixed quadrature rule.
 *
 * GaussLaguerre: sum(weights[i] * f(nodes[i])) ≈ ∫_0^∞ e^{-x} f(x) dx, and
 * log_weights[i] = ln(weights[i]) stays finite where weights[i] underflows.
 *
 * ChebyshevGauss: weights[i] = (π/M) sqrt(1 - nodes[i]^2) so that
 * sum(weights[i] * g(nodes[i])) ≈ ∫_{-1}^{1} g(t) dt.
 */
struct QuadratureRule {
    RuleKind kind{};
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> log_weights;
};

namespace detail {

// Evaluates L_n(x) and L_{n-1}(x) by the three-term recurrence, returning the
// pair scaled by exp(-log_scale) so large arguments do not overflow.
struct LaguerrePair {
    double ln = 0.0;
    double ln_minus_1 = 0.0;
    double log_scale = 0.0;
};

inline LaguerrePair laguerre_pair(int n, double x) {
    LaguerrePair out;
    double prev = 1.0;  // L_0
    if (n == 0) {
        out.ln = 1.0;
        return out;
    }
    double cur = 1.0 - x;  // L_1
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) {
            cur *= 1e-150;
            prev *= 1e-150;
            out.log_scale += 150.0 * std::numbers::ln10;
        }
    }
    out.ln = cur;
    out.ln_minus_1 = prev;
    return out;
}

}  // namespace detail

/// Gauss-Laguerre rule of order M (1 ≤ M ≤ 200).
inline QuadratureRule gauss_laguerre(int M) {
    if (M < 1 || M > 200)
        throw std::domain_error("gauss_laguerre: order must be in [1, 200]");
    QuadratureRule rule;
    rule.kind = RuleKind::GaussLaguerre;
    rule.order = M;

    // Golub-Welsch: eigenvalues of the Jacobi matrix give the roots.
    Eigen::VectorXd diag(M);
    Eigen::VectorXd sub(std::max(M - 1, 1));
    for (int i = 0; i < M; ++i)
        diag(i) = 2.0 * i + 1.0;
    for (int i = 1; i < M; ++i)
        sub(i - 1) = static_cast<double>(i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    if (M == 1) {
        rule.nodes = {1.0};
    } else {
        solver.computeFromTridiagonal(diag, sub.head(M - 1), Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& ev = solver.eigenvalues();
        rule.nodes.assign(ev.data(), ev.data() + M);
    }

    // Newton polish on L_M, then the weight formula xi / ((M+1)^2 L_{M+1}(xi)^2).
    for (double& x : rule.nodes) {
        for (int it = 0; it < 8; ++it) {
            const auto p = detail::laguerre_pair(M, x);
            const double deriv = M * (p.ln - p.ln_minus_1) / x;
            const double step = p.ln / deriv;
            x -= step;
            if (std::abs(step) <= 1e-16 * x)
                break;
        }
    }
    std::sort(rule.nodes.begin(), rule.nodes.end());
    rule.weights.resize(M);
    rule.log_weights.resize(M);
    for (int i = 0; i < M; ++i) {
        const double x = rule.nodes[i];
        const auto p = detail::laguerre_pair(M + 1, x);
        const double log_w = std::log(x) - 2.0 * std::log(M + 1.0) - 2.0 * (std::log(std::abs(p.ln)) + p.log_scale);
        rule.log_weights[i] = log_w;
        rule.weights[i] = std::exp(log_w);
    }
    return rule;
}

/// Chebyshev-Gauss rule of order M (1 ≤ M ≤ 500) for plain integrals on [-1, 1].
inline QuadratureRule chebyshev_gauss(int M) {
    if (M < 1 || M > 500)
        throw std::domain_error("chebyshev_gauss: order must be in [1, 500]");
    QuadratureRule rule;
    rule.kind = RuleKind::ChebyshevGauss;
    rule.order = M;
    rule.nodes.resize(M);
    rule.weights.resize(M);
    rule.log_weights.resize(M);
    for (int m = 1; m <= M; ++m) {
        const double angle = (2.0 * m - 1.0) * std::numbers::pi / (2.0 * M);
        // cos(π/2) is not exactly zero in floating point.
        const double node = (2 * m - 1 == M) ? 0.0 : std::cos(angle);
        rule.nodes[m - 1] = node;
        rule.weights[m - 1] = std::numbers::pi / M * std::sin(angle);
        rule.log_weights[m - 1] = std::log(rule.weights[m - 1]);
    }
    return rule;
}

/// Stopping criteria for the adaptive integrator.
struct Tolerance {
    double absolute = 1e-9;
    double relative = 1e-9;
    int max_depth = 15;
    int max_intervals = 4000;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    long evals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    int depth;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kKronrodNodes[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        kronrod += kKronrodWeights[j] * (f1 + f2);
        if (j % 2 == 1)
            gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h), depth};
}

}  // namespace detail

/**
 * Globally adaptive G7-K15 integration of f over [a, b].
 *
 * The interval with the largest error estimate is bisected until the summed
 * error is within max(absolute, relative·|value|). Segments deeper than
 * max_depth are kept as-is; if that leaves the target unmet the result is
 * returned with converged = false.
 */
template <class F>
IntegralResult integrate(F&& f, double a, double b, const Tolerance& tol = {}, int initial_pieces = 1) {
    IntegralResult res;
    if (a == b)
        return {0.0, 0.0, true, 0};
    auto counted = [&](double x) {
        ++res.evals;
        return static_cast<double>(f(x));
    };
    std::priority_queue<detail::Segment> open;
    std::vector<detail::Segment> frozen;
    initial_pieces = std::max(initial_pieces, 1);
    for (int i = 0; i < initial_pieces; ++i) {
        const double lo = a + (b - a) * i / initial_pieces;
        const double hi = (i + 1 == initial_pieces) ? b : a + (b - a) * (i + 1) / initial_pieces;
        open.push(detail::kronrod15(counted, lo, hi, 0));
    }
    int intervals = initial_pieces;
    auto totals = [&](double& value, double& error) {
        value = 0.0;
        error = 0.0;
        auto copy = open;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        for (const auto& s : frozen) {
            value += s.value;
            error += s.error;
        }
    };
    double value = 0.0, error = 0.0;
    totals(value, error);
    while (error > std::max(tol.absolute, tol.relative * std::abs(value))) {
        if (open.empty() || intervals >= tol.max_intervals)
            break;
        const detail::Segment worst = open.top();
        open.pop();
        if (worst.depth >= tol.max_depth) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::kronrod15(counted, worst.a, mid, worst.depth + 1);
        const auto right = detail::kronrod15(counted, mid, worst.b, worst.depth + 1);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        open.push(left);
        open.push(right);
        ++intervals;
    }
    totals(value, error);
    res.value = value;
    res.error = error;
    res.converged = error <= std::max(tol.absolute, tol.relative * std::abs(value));
    return res;
}

/// ∫_a^∞ f(x) dx through the substitution x = a + t/(1-t), t ∈ [0, 1).
template <class F>
IntegralResult integrate_half_line(F&& f, double a, const Tolerance& tol = {}) {
    auto g = [&](double t) {
        const double one_minus = 1.0 - t;
        if (one_minus <= 0.0)
            return 0.0;
        const double x = a + t / one_minus;
        const double v = static_cast<double>(f(x));
        return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
    };
    return integrate(g, 0.0, 1.0, tol);
}

/// ∫_{x_lo}^{x_hi} f(x) dx through x = e^u, for integrands spread over many decades.
template <class F>
IntegralResult integrate_log(F&& f, double x_lo, double x_hi, const Tolerance& tol = {}, int initial_pieces = 8) {
    if (!(x_lo > 0.0) || !(x_hi >= x_lo))
        throw std::domain_error("integrate_log: requires 0 < x_lo <= x_hi");
    auto g = [&](double u) {
        const double x = std::exp(u);
        const double v = static_cast<double>(f(x));
        return v == 0.0 ? 0.0 : v * x;
    };
    return integrate(g, std::log(x_lo), std::log(x_hi), tol, initial_pieces);
}

}  // namespace starsec::math
