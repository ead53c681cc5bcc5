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
 * @file special_functions.hpp
 * @brief Gamma-family, modified Bessel and confluent hypergeometric functions.
 *
 * Everything here is a pure function of its arguments and works in 64-bit
 * floating point. Series evaluations stop when the next term contributes less
 * than kSeriesRelTol relative to the partial sum, or after kSeriesMaxTerms
 * terms (reported as a NonConvergenceError).
 */

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace starsec::math {

inline constexpr double kSeriesRelTol = 1e-15;
inline constexpr long kSeriesMaxTerms = 1'000'000;

/// Raised when a series or iterative evaluation fails to converge.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(std::string op, const std::string& what)
        : std::runtime_error(op + ": " + what), op_(std::move(op)) {}
    const std::string& operation() const noexcept { return op_; }

private:
    std::string op_;
};

/// ln Γ(x) for x > 0.
inline double ln_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("ln_gamma: argument must be positive");
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

/// ln of the Pochhammer symbol (x)_m = Γ(x+m)/Γ(x), x > 0, x+m > 0.
inline double ln_pochhammer(double x, double m) {
    return ln_gamma(x + m) - ln_gamma(x);
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
inline double reg_lower_incomplete_gamma(double a, double x) {
    if (!(a > 0.0))
        throw std::domain_error("reg_lower_incomplete_gamma: shape must be positive");
    if (!(x >= 0.0))
        throw std::domain_error("reg_lower_incomplete_gamma: argument must be nonnegative");
    if (x == 0.0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    return boost::math::gamma_p(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), without cancellation.
inline double reg_upper_incomplete_gamma(double a, double x) {
    if (!(a > 0.0))
        throw std::domain_error("reg_upper_incomplete_gamma: shape must be positive");
    if (!(x >= 0.0))
        throw std::domain_error("reg_upper_incomplete_gamma: argument must be nonnegative");
    if (x == 0.0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;
    return boost::math::gamma_q(a, x);
}

namespace detail {

// Power series for I_nu(x) valid for any real nu with nu+1 not a nonpositive
// integer. Used directly for nu >= 0 and by the reflection route for K_nu.
inline double bessel_i_series(double nu, double x) {
    if (x == 0.0)
        return nu == 0.0 ? 1.0 : 0.0;
    const double half = 0.5 * x;
    double term;
    if (nu >= 0.0) {
        const double log_first = nu * std::log(half) - std::lgamma(nu + 1.0);
        if (log_first > std::log(std::numeric_limits<double>::max()))
            throw std::overflow_error("bessel_i: result exceeds floating range");
        term = std::exp(log_first);
    } else {
        term = std::pow(half, nu) / std::tgamma(nu + 1.0);
    }
    double sum = term;
    const double q = half * half;
    for (long k = 0; k < kSeriesMaxTerms; ++k) {
        term *= q / ((k + 1.0) * (k + nu + 1.0));
        sum += term;
        if (!std::isfinite(sum))
            throw std::overflow_error("bessel_i: result exceeds floating range");
        // Terms start decreasing once (k+1)(k+nu+1) > q.
        if (std::abs(term) < kSeriesRelTol * std::abs(sum) && (k + 1.0) * (k + nu + 1.0) > q)
            return sum;
    }
    throw NonConvergenceError("bessel_i", "series exceeded term limit");
}

}  // namespace detail

/// Modified Bessel function of the first kind I_nu(x), nu >= 0, x >= 0.
inline double bessel_i(double nu, double x) {
    if (!(nu >= 0.0) || !(x >= 0.0))
        throw std::domain_error("bessel_i: order and argument must be nonnegative");
    return detail::bessel_i_series(nu, x);
}

/**
 * Modified Bessel function of the second kind K_nu(x), x > 0, any real nu.
 *
 * Trapezoid rule on K_nu(x) = ∫_0^∞ exp(-x cosh t) cosh(nu t) dt, with the
 * step scaled to the peak width 1/sqrt(x).
 */
inline double bessel_k(double nu, double x) {
    if (!(x > 0.0))
        throw std::domain_error("bessel_k: argument must be positive");
    nu = std::abs(nu);
    const double h = std::min(0.05, 0.25 / std::sqrt(x));
    // exp(-x (cosh t - 1)) cosh(nu t), scaled by exp(-x) at the end.
    double sum = 0.5;  // t = 0 contributes half weight; cosh(0) = 1
    for (int i = 1; i < 100000; ++i) {
        const double t = i * h;
        const double log_term = -x * (std::cosh(t) - 1.0) + nu * t;
        const double term = std::exp(log_term) * 0.5 * (1.0 + std::exp(-2.0 * nu * t));
        sum += term;
        if (term < 1e-18 * sum && x * (std::cosh(t) - 1.0) > nu * t)
            return h * sum * std::exp(-x);
    }
    throw NonConvergenceError("bessel_k", "trapezoid sum did not decay");
}

/**
 * K_nu(x) through the reflection formula π (I_{-nu} - I_nu) / (2 sin nu π).
 *
 * Integer orders are evaluated as the mean of nu ± 1e-4 (K is even and smooth
 * in nu; offset error O(1e-8) relative). Accurate only for moderate
 * x; kept as an independent route for cross-checking bessel_k.
 */
inline double bessel_k_reflection(double nu, double x) {
    if (!(x > 0.0))
        throw std::domain_error("bessel_k_reflection: argument must be positive");
    auto raw = [x](double v) {
        return std::numbers::pi * (detail::bessel_i_series(-v, x) - detail::bessel_i_series(v, x)) /
               (2.0 * std::sin(v * std::numbers::pi));
    };
    nu = std::abs(nu);
    if (std::abs(nu - std::round(nu)) < 1e-3) {
        constexpr double off = 1e-4;
        const double n = std::round(nu);
        return 0.5 * (raw(n + off) + raw(std::abs(n - off) == 0.0 ? off : std::abs(n - off)));
    }
    return raw(nu);
}

namespace detail {

// Plain Kummer series, x >= 0 or terminating.
inline double hyp1f1_series(double a, double b, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (long n = 0; n < kSeriesMaxTerms; ++n) {
        term *= (a + n) / (b + n) * x / (n + 1.0);
        sum += term;
        if (term == 0.0)
            return sum;
        if (!std::isfinite(sum))
            throw std::overflow_error("hyp1f1: result exceeds floating range");
        const double ratio = std::abs((a + n + 1.0) / (b + n + 1.0) * x / (n + 2.0));
        if (std::abs(term) < kSeriesRelTol * std::abs(sum) && ratio < 1.0)
            return sum;
    }
    throw NonConvergenceError("hyp1f1", "Kummer series exceeded 1e6 terms");
}

}  // namespace detail

/// Confluent hypergeometric function 1F1(a; b; x) by the Kummer series.
inline double hyp1f1(double a, double b, double x) {
    if (b <= 0.0 && b == std::floor(b))
        throw std::domain_error("hyp1f1: b must not be a nonpositive integer");
    if (x >= 0.0)
        return detail::hyp1f1_series(a, b, x);
    return std::exp(x) * detail::hyp1f1_series(b - a, b, -x);
}

/**
 * ln 1F1(a; b; x) for a > 0, b > 0, x >= 0 (all series terms positive).
 * The running sum is rescaled so large arguments do not overflow.
 */
inline double log_hyp1f1(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0))
        throw std::domain_error("log_hyp1f1: requires a > 0, b > 0, x >= 0");
    double log_scale = 0.0;
    double term = 1.0;
    double sum = 1.0;
    for (long n = 0; n < kSeriesMaxTerms; ++n) {
        term *= (a + n) / (b + n) * x / (n + 1.0);
        sum += term;
        if (sum > 1e250) {
            sum *= 1e-250;
            term *= 1e-250;
            log_scale += 250.0 * std::numbers::ln10;
        }
        const double ratio = (a + n + 1.0) / (b + n + 1.0) * x / (n + 2.0);
        if (term < kSeriesRelTol * sum && ratio < 1.0)
            return std::log(sum) + log_scale;
    }
    throw NonConvergenceError("hyp1f1", "Kummer series exceeded 1e6 terms");
}

}  // namespace starsec::math
