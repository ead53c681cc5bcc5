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
 * @file geometry.hpp
 * @brief Network layout, path loss, user / eavesdropper placement and the
 *        channel-power CDFs of the legitimate users.
 *
 * The surface sits at the origin and the BS at distance l_BR. Each legitimate
 * user is uniform on a half-disc of radius R_U on its own side; eavesdroppers
 * form a Poisson field of density λ_e on the whole plane, each on one side.
 */

#include "starsec/errors.hpp"
#include "starsec/fading.hpp"
#include "starsec/math/quadrature.hpp"
#include "starsec/math/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace starsec::geometry {

/// Which side of the surface a node is on.
enum class Side { Reflect = 0, Transmit = 1 };

struct NetworkConfig {
    double l_BR = 50.0;      ///< BS to surface distance [m]
    double R_U = 50.0;       ///< user disc radius [m]
    double lambda_e = 1e-4;  ///< eavesdropper density [1/m^2]
    double alpha = 3.0;      ///< path-loss exponent
    double C_r = 1.0;        ///< path-loss intercept
    double rho_b = 1e8;      ///< transmit SNR toward users (linear)
    double rho_e = 1e5;      ///< transmit SNR toward eavesdroppers (linear)
    double a_s = 0.3;        ///< power share of the strong user
    double a_w = 0.7;        ///< power share of the weak user
    double R_s = 0.1;        ///< strong-user target secrecy rate [bit/s/Hz]
    double R_w = 0.1;        ///< weak-user target secrecy rate [bit/s/Hz]
    int N = 25;              ///< surface element count
    fading::FadingParams fading{};
    double eve_trunc_radius = 500.0;  ///< simulation-only Eve field radius [m]
    bool shared_first_hop = false;    ///< reuse the BS-surface hop across all receivers

    double delta() const { return 2.0 / alpha; }
    double A_L() const { return C_r * std::pow(l_BR, -alpha); }

    void validate() const {
        if (!(std::abs(a_s + a_w - 1.0) <= 1e-9))
            throw ConfigError("a_s + a_w = 1", "a_s + a_w = " + std::to_string(a_s + a_w));
        if (!(a_w > a_s))
            throw ConfigError("a_w > a_s", "the weak user must receive the larger power share");
        if (!(a_s > 0.0))
            throw ConfigError("a_s > 0", "strong-user power share must be positive");
        if (!(alpha > 2.0))
            throw ConfigError("alpha > 2", "path-loss exponent must exceed 2, got " + std::to_string(alpha));
        if (!(l_BR > 0.0))
            throw ConfigError("l_BR > 0", "BS-surface distance must be positive");
        if (!(R_U > 0.0))
            throw ConfigError("R_U > 0", "user disc radius must be positive");
        if (!(lambda_e >= 0.0))
            throw ConfigError("lambda_e >= 0", "eavesdropper density must be nonnegative");
        if (!(C_r > 0.0))
            throw ConfigError("C_r > 0", "path-loss intercept must be positive");
        if (!(rho_b > 0.0) || !(rho_e >= 0.0))
            throw ConfigError("rho > 0", "transmit SNRs must be positive");
        if (!(R_s >= 0.0) || !(R_w >= 0.0))
            throw ConfigError("R >= 0", "target rates must be nonnegative");
        if (N < 1)
            throw ConfigError("N >= 1", "element count must be at least 1");
        if (!(eve_trunc_radius > 0.0))
            throw ConfigError("eve_trunc_radius > 0", "truncation radius must be positive");
        if (!(fading.kappa1 >= 0.0) || !(fading.kappa2 >= 0.0))
            throw ConfigError("kappa >= 0", "kappa must be nonnegative");
        if (!(fading.mu1 > 0.0) || !(fading.mu2 > 0.0))
            throw ConfigError("mu > 0", "mu must be positive");
    }
};

/// Large-scale gain C_r (l_BR d)^{-α}.
inline double path_loss(double d, const NetworkConfig& cfg) {
    if (!(d > 0.0))
        throw std::domain_error("path_loss: distance must be > 0");
    return cfg.C_r * std::pow(cfg.l_BR * d, -cfg.alpha);
}

/// Disc-uniform radius on (0, R]; exact zeros are redrawn.
template <class Rng>
double sample_disc_radius(double R, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double v = 0.0;
    while (v == 0.0)
        v = u(rng);
    return R * std::sqrt(v);
}

struct LuPair {
    double d_R = 0.0;  ///< reflecting-side user distance [m]
    double d_T = 0.0;  ///< transmitting-side user distance [m]
};

template <class Rng>
LuPair sample_lu_pair(const NetworkConfig& cfg, Rng& rng) {
    LuPair p;
    p.d_R = sample_disc_radius(cfg.R_U, rng);
    p.d_T = sample_disc_radius(cfg.R_U, rng);
    return p;
}

struct EvePoint {
    double distance = 0.0;
    Side side = Side::Reflect;
};

/// Poisson field on the disc of radius `radius` (defaults to cfg.eve_trunc_radius).
template <class Rng>
std::vector<EvePoint> sample_eve_field(const NetworkConfig& cfg, Rng& rng, double radius = -1.0) {
    if (radius <= 0.0)
        radius = cfg.eve_trunc_radius;
    std::vector<EvePoint> out;
    if (cfg.lambda_e <= 0.0)
        return out;
    std::poisson_distribution<long> count(cfg.lambda_e * std::numbers::pi * radius * radius);
    std::bernoulli_distribution side(0.5);
    const long n = count(rng);
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        EvePoint e;
        e.distance = sample_disc_radius(radius, rng);
        e.side = side(rng) ? Side::Transmit : Side::Reflect;
        out.push_back(e);
    }
    return out;
}

/// c = x R_U^α / (A_L θ_r), the normalized argument of the user CDF.
inline double user_cdf_argument(double x, const fading::CascadedStats& stats, const NetworkConfig& cfg) {
    return x * std::pow(cfg.R_U, cfg.alpha) / (cfg.A_L() * stats.theta_r);
}

namespace detail {

// δ c^{-δ} ∫_0^c P(k,t) t^{δ-1} dt for c < 1 by termwise integration of the
// lower incomplete gamma series.
inline double unordered_cdf_small(double k, double delta, double c) {
    double sum = 0.0;
    double power = 1.0;  // (-c)^n / n!
    for (int n = 0; n < 200; ++n) {
        const double term = power * delta / ((k + n) * (k + n + delta));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            break;
        power *= -c / (n + 1.0);
    }
    return std::exp(k * std::log(c) - math::ln_gamma(k)) * sum;
}

}  // namespace detail

/**
 * Unordered user channel-power CDF
 * F(x) = (2/R_U^2) ∫_0^{R_U} P(k_r, x r^α / (A_L θ_r)) r dr,
 * in the closed form P(k, c) - c^{-δ} Γ(k+δ)/Γ(k) P(k+δ, c).
 */
inline double unordered_user_cdf(double x, const fading::CascadedStats& stats, const NetworkConfig& cfg) {
    if (!(x >= 0.0))
        throw std::domain_error("unordered_user_cdf: x must be >= 0");
    if (x == 0.0)
        return 0.0;
    const double k = stats.k_r;
    const double delta = cfg.delta();
    const double c = user_cdf_argument(x, stats, cfg);
    if (std::isinf(c))
        return 1.0;
    if (c < 1.0)
        return detail::unordered_cdf_small(k, delta, c);
    const double tail =
        std::exp(-delta * std::log(c) + math::ln_gamma(k + delta) - math::ln_gamma(k)) *
        math::reg_lower_incomplete_gamma(k + delta, c);
    return std::clamp(math::reg_lower_incomplete_gamma(k, c) - tail, 0.0, 1.0);
}

/// 1 - unordered_user_cdf, evaluated without cancellation in the upper tail.
inline double unordered_user_ccdf(double x, const fading::CascadedStats& stats, const NetworkConfig& cfg) {
    if (!(x >= 0.0))
        throw std::domain_error("unordered_user_ccdf: x must be >= 0");
    if (x == 0.0)
        return 1.0;
    const double k = stats.k_r;
    const double delta = cfg.delta();
    const double c = user_cdf_argument(x, stats, cfg);
    if (std::isinf(c))
        return 0.0;
    if (c < 1.0)
        return 1.0 - detail::unordered_cdf_small(k, delta, c);
    const double tail =
        std::exp(-delta * std::log(c) + math::ln_gamma(k + delta) - math::ln_gamma(k)) *
        math::reg_lower_incomplete_gamma(k + delta, c);
    return std::clamp(math::reg_upper_incomplete_gamma(k, c) + tail, 0.0, 1.0);
}

/// The same CDF by adaptive quadrature over the user radius.
inline math::IntegralResult unordered_user_cdf_quadrature(double x, const fading::CascadedStats& stats,
                                                          const NetworkConfig& cfg,
                                                          const math::Tolerance& tol = {1e-9, 1e-12, 15, 4000}) {
    if (!(x >= 0.0))
        throw std::domain_error("unordered_user_cdf_quadrature: x must be >= 0");
    const double scale = x / (cfg.A_L() * stats.theta_r);
    const double R = cfg.R_U;
    auto integrand = [&](double r) {
        if (r <= 0.0)
            return 0.0;
        return 2.0 / (R * R) * math::reg_lower_incomplete_gamma(stats.k_r, scale * std::pow(r, cfg.alpha)) * r;
    };
    return math::integrate(integrand, 0.0, R, tol, 4);
}

struct OrderedCdfs {
    double F_Hs = 0.0;  ///< strong (larger) channel power
    double F_Hw = 0.0;  ///< weak (smaller) channel power
};

/// Order statistics of two i.i.d. user channel powers.
inline OrderedCdfs ordered_from_unordered(double F) {
    return {F * F, 2.0 * F - F * F};
}

inline OrderedCdfs ordered_user_cdfs(double x, const fading::CascadedStats& stats, const NetworkConfig& cfg) {
    return ordered_from_unordered(unordered_user_cdf(x, stats, cfg));
}

/// Small-argument power law F(x) ≈ L_u x^{μ̂N}, reported in log form.
struct AsymptoticCdf {
    double mu_hat = 0.0;
    double exponent = 0.0;  ///< μ̂N
    int K_u = 1;            ///< 2 when μ1 = μ2, else 1
    std::optional<double> log_A_u;
    std::optional<double> log_L_u;
    std::optional<double> log_value;  ///< ln(L_u x^{μ̂N})
};

/**
 * Leading small-x behavior of the unordered user CDF.
 *
 * With μ1 ≠ μ2 the product PDF behaves as f_Δ(x) ≈ c x^{2μ̂-1}; A_u = c Γ(2μ̂)
 * is the matching Laplace-transform constant, and
 * L_u = 2 A_u^N R_U^{αμ̂N} / (A_L^{μ̂N} Γ(2μ̂N+1) (αμ̂N+2)).
 * With μ1 = μ2 the product PDF carries a logarithmic factor, so only the
 * exponent and K_u are reported.
 */
inline AsymptoticCdf asymptotic_unordered_cdf(double x, const fading::FadingParams& p, int N,
                                              const NetworkConfig& cfg) {
    if (!(x > 0.0))
        throw std::domain_error("asymptotic_unordered_cdf: x must be > 0");
    p.validate();
    AsymptoticCdf out;
    out.mu_hat = std::min(p.mu1, p.mu2);
    out.exponent = out.mu_hat * N;
    out.K_u = (p.mu1 == p.mu2) ? 2 : 1;
    if (out.K_u == 2)
        return out;

    const bool first_is_low = p.mu1 < p.mu2;
    const double mu_lo = first_is_low ? p.mu1 : p.mu2;
    const double mu_hi = first_is_low ? p.mu2 : p.mu1;
    const double kappa_hi = first_is_low ? p.kappa2 : p.kappa1;
    const double gap = mu_hi - mu_lo;
    // c = 2 (φ1 φ2)^μ̂ Γ(gap) 1F1(gap; μ_hi; κ_hi μ_hi) / (Γ(μ_lo) Γ(μ_hi) e^{μ1κ1+μ2κ2})
    const double log_c = std::log(2.0) + out.mu_hat * std::log(p.phi1() * p.phi2()) + math::ln_gamma(gap) +
                         math::log_hyp1f1(gap, mu_hi, kappa_hi * mu_hi) - math::ln_gamma(mu_lo) -
                         math::ln_gamma(mu_hi) - (p.mu1 * p.kappa1 + p.mu2 * p.kappa2);
    const double log_A = log_c + math::ln_gamma(2.0 * out.mu_hat);
    const double e = out.exponent;
    const double log_L = std::log(2.0) + N * log_A + cfg.alpha * e * std::log(cfg.R_U) - e * std::log(cfg.A_L()) -
                         math::ln_gamma(2.0 * e + 1.0) - std::log(cfg.alpha * e + 2.0);
    out.log_A_u = log_A;
    out.log_L_u = log_L;
    out.log_value = log_L + e * std::log(x);
    return out;
}

}  // namespace starsec::geometry
